import argparse
from typing import Tuple

from internal.custom_types.graph import Graph
from internal.custom_types.kneser import KneserParams
from internal.custom_types.pipeline import PipelineConfig
from internal.handlers.graph6 import Graph6Handler
from internal.handlers.kneser import KneserHandler
from internal.utils.config import get_settings


def budget(text: str) -> int:
    """argparse type for node budgets; accepts "1e7" as well as "10000000"."""
    try:
        value = int(float(text))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from e
    if value < 0:
        raise argparse.ArgumentTypeError(f"budget must be >= 0, got {text!r}")
    return value


def vertex_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated vertices, got {text!r}") from e


def parse_target(text: str) -> Tuple[Graph, str]:
    """Resolve "kneser:n,k" or "graph6:<string>" to a target graph and its name."""
    kind, _, body = text.partition(":")
    if kind == "kneser":
        params = KneserParams.parse(body)
        return KneserHandler.kneser_graph(params)[0], str(params)
    if kind == "graph6":
        return Graph6Handler.parse_graph6(body), text
    raise ValueError(f"Target must be 'kneser:n,k' or 'graph6:<string>', got {text!r}")


def add_pipeline_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, default=2, help="target level: color into K(2k+1,k)")
    parser.add_argument("--L", type=int, default=None, help="thread threshold (default 3(2k+1))")
    parser.add_argument("--budget", type=budget, default=None, help="search node budget")
    parser.add_argument("--variant", default=None, choices=["standard", "degree2"], help="discharging rule variant")
    parser.add_argument("--max-steps", type=int, default=None, help="cap on reduction steps")
    parser.add_argument("--base-size", type=int, default=None, help="stop reducing at this many vertices")


def pipeline_config(args: argparse.Namespace, timing: bool = True) -> PipelineConfig:
    """Flags override the [pipeline] table of the config file, which overrides built-in defaults."""
    values = get_settings().section("pipeline")

    def pick(flag, key, default):
        if flag is not None:
            return flag
        return values.get(key, default)

    node_budget = pick(args.budget, "node_budget", None)
    return PipelineConfig(
        k=args.k,
        L=pick(args.L, "L", None),
        node_budget=None if node_budget is None else int(float(node_budget)),
        rule_variant=pick(args.variant, "rule_variant", "standard"),
        max_reduction_steps=pick(args.max_steps, "max_reduction_steps", None),
        base_size=pick(args.base_size, "base_size", 8),
        timing=timing,
    )
