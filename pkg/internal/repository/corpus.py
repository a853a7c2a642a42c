import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from internal.custom_types.graph import Graph
from internal.handlers.graph6 import Graph6Handler

logger = logging.getLogger(__name__)


class CorpusRepository:
    """File I/O for graph corpora and reports.

    A path of "-" means stdin for reads and stdout for writes.
    """

    @staticmethod
    def read_graphs(path: str) -> List[Graph]:
        """Read graph6 strings, one per line; blank lines and '#' comments are skipped.

        Raises:
            OSError: If the file cannot be read
            MalformedEncoding: If a line is not valid graph6
        """
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="ascii")
        graphs = []
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                graphs.append(Graph6Handler.parse_graph6(line))
            except ValueError as e:
                logger.error(f"{path}:{number}: {str(e)}")
                raise
        logger.info(f"Read {len(graphs)} graphs from {path}")
        return graphs

    @staticmethod
    def write_graphs(path: str, graphs: List[Graph]) -> None:
        text = "".join(Graph6Handler.write_graph6(g) + "\n" for g in graphs)
        CorpusRepository._write_text(path, text)

    @staticmethod
    def write_json(path: Optional[str], record: Any) -> None:
        CorpusRepository._write_text(path or "-", json.dumps(record, indent=2) + "\n")

    @staticmethod
    def write_json_lines(path: Optional[str], records: List[Dict[str, Any]]) -> None:
        CorpusRepository._write_text(path or "-", "".join(json.dumps(r) + "\n" for r in records))

    @staticmethod
    def write_csv(path: Optional[str], table: pd.DataFrame) -> None:
        CorpusRepository._write_text(path or "-", table.to_csv(index=False, lineterminator="\n"))

    @staticmethod
    def _write_text(path: str, text: str) -> None:
        if path == "-":
            sys.stdout.write(text)
            return
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8", newline="\n")
        logger.info(f"Wrote {target}")
