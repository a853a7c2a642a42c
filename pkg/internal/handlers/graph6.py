import logging

import networkx as nx

from internal.custom_types.errors import MalformedEncoding
from internal.custom_types.graph import Graph

logger = logging.getLogger(__name__)


class Graph6Handler:
    @staticmethod
    def parse_graph6(text: str) -> Graph:
        """Decode one graph6 string (no ">>graph6<<" header).

        Args:
            text: The ASCII encoding; surrounding whitespace is ignored

        Returns:
            Graph: The labeled graph, vertex i being the i-th vertex of the encoding

        Raises:
            MalformedEncoding: If the string is empty, has a byte outside 63..126,
                or its length disagrees with the encoded vertex count
        """
        data = text.strip()
        if not data:
            raise MalformedEncoding("Empty graph6 string")
        bad = [c for c in data if not 63 <= ord(c) <= 126]
        if bad:
            raise MalformedEncoding(f"graph6 byte out of range: {bad[0]!r}")
        try:
            g = nx.from_graph6_bytes(data.encode("ascii"))
        except (nx.NetworkXError, ValueError, IndexError) as e:
            raise MalformedEncoding(f"Corrupt graph6 string {data!r}: {str(e)}") from e
        return Graph.from_networkx(g)

    @staticmethod
    def write_graph6(g: Graph) -> str:
        """Encode a graph as graph6 without header or trailing newline."""
        return nx.to_graph6_bytes(g.to_networkx(), header=False).decode("ascii").rstrip("\n")
