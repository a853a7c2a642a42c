import argparse
import logging

from internal.handlers.discharging import DischargingHandler
from internal.repository.corpus import CorpusRepository
from internal.utils.config import load_rule_variant

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    discharge = subparsers.add_parser("discharge", help="run the discharging rules and audit conservation")
    discharge.add_argument("--in", dest="input", required=True, help="graph6 file ('-' for stdin)")
    discharge.add_argument("--k", type=int, default=2, help="R2 looks at chorded odd cycles of length <= 2k+3")
    discharge.add_argument("--L", type=int, default=None, help="R3 thread threshold (default 3(2k+3))")
    discharge.add_argument("--variant", choices=["standard", "degree2"], default="standard")
    discharge.add_argument("--log", default=None, help="write the transfer log CSV of the first graph here")
    discharge.add_argument("--out", default=None, help="write JSON here instead of stdout")


def discharge_command(args: argparse.Namespace) -> int:
    """Exit 1 when some final total differs from 2|E|."""
    variant = load_rule_variant(args.variant)
    L = args.L if args.L is not None else 3 * (2 * args.k + 3)

    records = []
    unbalanced = 0
    for index, g in enumerate(CorpusRepository.read_graphs(args.input)):
        state = DischargingHandler.run_discharging(g, args.k, L, DischargingHandler.init_charges(g), variant)
        audit = DischargingHandler.audit_charges(g, state)
        if index == 0 and args.log:
            CorpusRepository.write_csv(args.log, DischargingHandler.export_transfer_log(state))
        unbalanced += not audit.balanced
        records.append({"rounds": state.rounds, "transfers": len(state.log), **audit.to_dict()})

    CorpusRepository.write_json(args.out, records)
    return 1 if unbalanced else 0
