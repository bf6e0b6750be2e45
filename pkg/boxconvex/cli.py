"""Command line interface of :py:mod:`boxconvex`.

All commands print a single JSON object (rationals as canonical strings,
sorted keys, newline terminated) and report their outcome via the exit code:

- ``0``: yes (convex, all PSD, consistent reduction)
- ``1``: no (not convex, PSD violated, inconsistency)
- ``2``: malformed input, including a box that does not match the polynomial
  and an invalid ``BOXCONVEX_THREADS``
- ``3``: input outside of the domain of the operation
- ``4``: unknown
- ``5``: a brute force size guard was exceeded

"""

import argparse
import enum
import json
import logging
import sys
from pathlib import Path
from typing import Any
from typing import Callable
from typing import Dict
from typing import List
from typing import Optional

from filelock import FileLock

from boxconvex.convexity import ConvexityStatus
from boxconvex.convexity import ConvexityVerdict
from boxconvex.convexity import check_general
from boxconvex.convexity import check_sampled
from boxconvex.errors import DomainError
from boxconvex.errors import InputFormatError
from boxconvex.errors import TooLargeError
from boxconvex.gadgets import Graph
from boxconvex.gadgets import build_gadget
from boxconvex.gadgets import maxcut_to_cubic
from boxconvex.gadgets import maxcut_to_interval
from boxconvex.helpers import DEFAULT_SEED
from boxconvex.interval import IntervalSymMatrix
from boxconvex.interval import check_interval_psd
from boxconvex.linalg import vector_from_json
from boxconvex.logging import _logger
from boxconvex.logging import set_internal_logging_level
from boxconvex.oracles import gap_check
from boxconvex.oracles import lemma_bound_check
from boxconvex.oracles import max_cut_bruteforce
from boxconvex.oracles import verify_reduction
from boxconvex.polynomial import Box
from boxconvex.polynomial import Polynomial

#: default number of samples of the negative curvature search
DEFAULT_BUDGET = 256

#: name of the lock file guarding an output directory
LOCK_FILE_NAME = ".boxconvex.lock"


@enum.unique
class ExitCode(enum.IntEnum):
    """Exit codes of the ``boxconvex`` command."""

    YES = 0
    NO = 1
    PARSE_ERROR = 2
    DOMAIN_ERROR = 3
    UNKNOWN = 4
    TOO_LARGE = 5


def dump_json(obj: Any) -> str:
    """Canonical serialization of every object written by the CLI."""
    return json.dumps(obj, sort_keys=True) + "\n"


def _load_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as os_err:
        raise InputFormatError(f"Cannot read {path}: {os_err}") from os_err
    except json.JSONDecodeError as json_err:
        raise InputFormatError(f"{path} is not valid JSON: {json_err}") from json_err


def _emit(obj: Any) -> None:
    sys.stdout.write(dump_json(obj))


def write_outputs(out_dir: Path, files: Dict[str, Any]) -> List[Path]:
    """Writes every JSON document of ``files`` into ``out_dir`` while holding
    the directory's lock file.

    """
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    with FileLock(out_dir / LOCK_FILE_NAME):
        for name, obj in sorted(files.items()):
            target = out_dir / name
            target.write_text(dump_json(obj), encoding="utf-8")
            _logger.debug("Wrote %s", target)
            written.append(target)
    return written


def _cmd_gadget(args: argparse.Namespace) -> ExitCode:
    graph = Graph.from_json(_load_json(args.graph))
    files: Dict[str, Any]
    if args.target == "to-cubic":
        cubic = maxcut_to_cubic(graph, args.k)
        files = {"f.json": cubic.f.to_json(), "box.json": cubic.box.to_json()}
        manifest = cubic.manifest()
    elif args.target == "to-interval":
        files = {"interval.json": maxcut_to_interval(graph, args.k).to_json()}
        manifest = build_gadget(graph, args.k).manifest()
    else:
        gadget = build_gadget(graph, args.k)
        files = {"pencil.json": gadget.pencil.to_json()}
        manifest = gadget.manifest()
    files["manifest.json"] = manifest

    written = write_outputs(Path(args.out), files)
    _emit({"files": [str(p) for p in written], "manifest": manifest})
    return ExitCode.YES


_VERDICT_EXIT_CODES = {
    ConvexityStatus.CONVEX: ExitCode.YES,
    ConvexityStatus.NOT_CONVEX: ExitCode.NO,
    ConvexityStatus.UNKNOWN: ExitCode.UNKNOWN,
}


def _cmd_check(args: argparse.Namespace) -> ExitCode:
    if args.target == "interval-psd":
        family = IntervalSymMatrix.from_json(_load_json(args.matrix))
        result = check_interval_psd(family)
        _emit(result.to_json())
        return ExitCode.YES if result.all_psd else ExitCode.NO

    poly = Polynomial.from_json(_load_json(args.poly))
    box = Box.from_json(_load_json(args.box))
    if box.dim != poly.nvars:
        raise InputFormatError(
            f"Box of dimension {box.dim} for a polynomial in {poly.nvars} variables"
        )
    verdict: ConvexityVerdict
    if args.mode == "exact":
        verdict = check_general(poly, box, args.budget, args.seed)
    else:
        verdict = check_sampled(poly, box, args.budget, args.seed)
    _emit(verdict.to_json())
    return _VERDICT_EXIT_CODES[verdict.status]


def _cmd_oracle(args: argparse.Namespace) -> ExitCode:
    graph = Graph.from_json(_load_json(args.graph))
    if args.target == "maxcut":
        _emit(max_cut_bruteforce(graph).to_json())
        return ExitCode.YES

    if args.target == "lemma-check":
        if args.point is None:
            raise InputFormatError("lemma-check needs --point")
        lemma = lemma_bound_check(
            graph.adjacency(), vector_from_json(_load_json(args.point))
        )
        _emit(lemma.to_json())
        return ExitCode.YES if lemma.holds else ExitCode.NO

    if args.k is None:
        raise InputFormatError(f"{args.target} needs --k")
    if args.target == "gap-check":
        gap = gap_check(build_gadget(graph, args.k))
        _emit(gap.to_json())
        return ExitCode.NO if gap.in_forbidden_band else ExitCode.YES

    report = verify_reduction(graph, args.k)
    _emit(report.to_json())
    return ExitCode.YES if report.consistent else ExitCode.NO


def build_parser() -> argparse.ArgumentParser:
    """The argument parser of the ``boxconvex`` command."""
    parser = argparse.ArgumentParser(
        prog="boxconvex",
        description=(
            "Exact convexity checks of polynomials over boxes, interval PSD "
            "checks and MAX-CUT reduction gadgets"
        ),
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Verbosity of the log messages on stderr",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    gadget_p = sub.add_parser("gadget", help="Construct reduction objects")
    gadget_p.add_argument(
        "target", choices=["to-cubic", "to-interval", "to-pencil"]
    )
    gadget_p.add_argument("--graph", required=True, help="Graph JSON file")
    gadget_p.add_argument("--k", required=True, type=int, help="Cut threshold")
    gadget_p.add_argument("--out", required=True, help="Output directory")
    gadget_p.set_defaults(func=_cmd_gadget)

    check_p = sub.add_parser("check", help="Convexity and interval PSD checks")
    check_p.add_argument("target", choices=["convex", "interval-psd"])
    check_p.add_argument("--poly", help="Polynomial JSON file")
    check_p.add_argument("--box", help="Box JSON file")
    check_p.add_argument("--matrix", help="Interval matrix JSON file")
    check_p.add_argument(
        "--mode",
        choices=["exact", "fast"],
        default="exact",
        help=(
            "exact: decide degree <= 3 exactly; fast: sufficient and "
            "sampled necessary tests only"
        ),
    )
    check_p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    check_p.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_BUDGET,
        help="Number of samples of the negative curvature search",
    )
    check_p.set_defaults(func=_cmd_check)

    oracle_p = sub.add_parser("oracle", help="Brute force oracles")
    oracle_p.add_argument(
        "target",
        choices=["maxcut", "verify-reduction", "gap-check", "lemma-check"],
    )
    oracle_p.add_argument("--graph", required=True, help="Graph JSON file")
    oracle_p.add_argument("--k", type=int, help="Cut threshold")
    oracle_p.add_argument("--point", help="Point JSON file (lemma-check)")
    oracle_p.set_defaults(func=_cmd_oracle)
    return parser


def _validate_check_args(args: argparse.Namespace) -> None:
    if args.cmd != "check":
        return
    if args.target == "interval-psd" and args.matrix is None:
        raise InputFormatError("interval-psd needs --matrix")
    if args.target == "convex" and (args.poly is None or args.box is None):
        raise InputFormatError("convex needs --poly and --box")
    if args.budget < 1:
        raise InputFormatError(f"--budget must be positive, got {args.budget}")


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point of the ``boxconvex`` command, returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(format="%(levelname)s: %(message)s")
    set_internal_logging_level(args.log_level)

    func: Callable[[argparse.Namespace], ExitCode] = args.func
    try:
        _validate_check_args(args)
        return int(func(args))
    except InputFormatError as exc:
        _logger.error("%s", exc)
        return int(ExitCode.PARSE_ERROR)
    except DomainError as exc:
        _logger.error("%s", exc)
        return int(ExitCode.DOMAIN_ERROR)
    except TooLargeError as exc:
        _logger.error("%s", exc)
        return int(ExitCode.TOO_LARGE)
