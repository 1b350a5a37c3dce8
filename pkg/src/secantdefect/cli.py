"""Command line front end.

Exit status: 0 success, 1 internal error, 2 usage or input rejected,
3 the computation disagrees with itself (failed consistency check).
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .catalog import CATALOG, ParamVariety, SamplingError, builtin, catalog_names
from .classify import ClassificationError, classify_fourfold
from .curves import CURVES, RationalCurveP4, branch_rank_sequence, ranks
from .engine import NotDefectiveError, full_report
from .manifest import ManifestError, digest, emit, load

__all__ = ["main", "run_command", "UsageError"]

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_INCONSISTENT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # raise instead of exiting so run_command stays pure
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--file", help="JSON manifest")
    src.add_argument("--builtin", help="catalog name, e.g. segre:2:2 or cone:1:veronese:3:2")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--primes", type=int, default=3)
    common.add_argument("--seeds", type=int, default=3, help="seeds per prime")
    common.add_argument("--trials", type=int, default=3)
    common.add_argument("--field", choices=("modp", "rational"), default="modp")
    common.add_argument("--json", action="store_true")

    p = _Parser(prog="secantdefect", description="Secant defects of parameterized varieties.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("invariants", parents=[common], help="secant, tangential and contact invariants")
    sub.add_parser("classify", parents=[common], help="case list for a defective 4-fold")
    sub.add_parser("curve-ranks", parents=[common], help="ranks of a rational curve in P^4")
    sub.add_parser("selftest", help="quick end-to-end checks")
    cat = sub.add_parser("catalog", help="built-in varieties")
    csub = cat.add_subparsers(dest="action", required=True, parser_class=_Parser)
    csub.add_parser("list")
    emit_p = csub.add_parser("emit")
    emit_p.add_argument("name")
    return p


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _load_input(args):
    if args.file:
        try:
            return load(args.file)
        except OSError as exc:
            raise ManifestError(f"{args.file}: {exc.strerror}") from None
    if args.builtin:
        if args.command == "curve-ranks":
            if args.builtin not in CURVES:
                raise ManifestError(f"unknown builtin curve {args.builtin!r}; "
                                    f"choose from {sorted(CURVES)}")
            return CURVES[args.builtin]()
        try:
            return builtin(args.builtin)
        except KeyError as exc:
            raise ManifestError(str(exc.args[0])) from None
    raise UsageError("one of --file or --builtin is required")


def _check_counts(args) -> None:
    for flag in ("primes", "seeds", "trials"):
        if getattr(args, flag) < 1:
            raise UsageError(f"--{flag} must be positive")
    if args.seed < 0 or args.seed >= 2**64:
        raise UsageError("--seed must be an unsigned 64-bit integer")


def _envelope(X, rep) -> dict:
    return {
        "version": __version__,
        "input": {"name": rep.name, "sha256": digest(emit(X))},
        "field": rep.field,
        "seeds": rep.seeds,
        "primes": rep.primes_used,
        "trials": rep.trials,
        "tags": rep.tags,
        "invariants": rep.invariants(),
        "checks": rep.checks,
        "disagreements": rep.disagreements,
        "provenance": rep.provenance,
    }


def _text_report(rep) -> list[str]:
    lines = [f"{rep.name}: n={rep.n} r={rep.r}"]
    for k, v in rep.invariants().items():
        if k not in ("n", "r") and v is not None:
            lines.append(f"  {k} = {v}")
    for c in rep.checks:
        lines.append(f"  check {c['name']}: {c['status'].upper()}")
    if rep.disagreements:
        lines.append("  disagreement on: " + ", ".join(rep.disagreements))
    return lines


def _variety_report(args):
    X = _load_input(args)
    if not isinstance(X, ParamVariety):
        raise ManifestError("this command needs a variety, not a curve")
    _check_counts(args)
    rep = full_report(X, seed=args.seed, primes=args.primes, seeds=args.seeds,
                      trials=args.trials, field_kind=args.field)
    return X, rep


def _cmd_invariants(args) -> tuple[int, str]:
    X, rep = _variety_report(args)
    status = EXIT_OK if rep.consistent else EXIT_INCONSISTENT
    if args.json:
        return status, _dump(_envelope(X, rep))
    return status, "\n".join(_text_report(rep))


def _cmd_classify(args) -> tuple[int, str]:
    X, rep = _variety_report(args)
    if not rep.consistent:
        out = _dump(_envelope(X, rep)) if args.json else "\n".join(_text_report(rep))
        return EXIT_INCONSISTENT, out
    match = classify_fourfold(rep)
    status = EXIT_INCONSISTENT if match.confidence == "inconsistent" else EXIT_OK
    if args.json:
        doc = _envelope(X, rep)
        doc["classification"] = match.to_dict()
        return status, _dump(doc)
    lines = [f"{rep.name}: {match}",
             f"  f={rep.f} gamma={rep.gamma} epsilon={rep.epsilon} r={rep.r} "
             f"species={rep.species} cone={rep.is_cone}"]
    for case in match.cases:
        lines.append(f"  ({case}) {match.rationale[case]}")
        if case in match.notes:
            lines.append(f"      note: {match.notes[case]}")
    return status, "\n".join(lines)


def _cmd_curve(args) -> tuple[int, str]:
    C = _load_input(args)
    if not isinstance(C, RationalCurveP4):
        raise ManifestError("curve-ranks needs a curve manifest {degree, forms}")
    rep = ranks(C)
    status = EXIT_OK if rep.ok else EXIT_INCONSISTENT
    if args.json:
        name = args.builtin or "curve"
        doc = {
            "version": __version__,
            "input": {"name": name, "sha256": digest(emit(C))},
            "field": "rational",
            "ranks": rep.to_dict(),
            "checks": [{"name": k, "status": "pass" if v else "fail"}
                       for k, v in rep.checks.items()],
        }
        return status, _dump(doc)
    lines = [f"degree {rep.d}: n1={rep.n1} n2={rep.n2} n3={rep.n3}",
             f"  T = {rep.T}", f"  branch sums = {rep.sums}"]
    lines += [f"  {k}: {'PASS' if v else 'FAIL'}" for k, v in rep.checks.items()]
    return status, "\n".join(lines)


def _cmd_catalog(args) -> tuple[int, str]:
    if args.action == "list":
        lines = []
        for name in catalog_names():
            X = CATALOG[name]()
            extra = f" case ({X.case})" if X.case else ""
            lines.append(f"{name}  n={X.n} r={X.r}{extra}")
        return EXIT_OK, "\n".join(lines)
    try:
        X = builtin(args.name)
    except KeyError as exc:
        raise ManifestError(str(exc.args[0])) from None
    return EXIT_OK, _dump(emit(X))


def _selftest() -> list[tuple[str, bool]]:
    out = []
    rep = full_report(builtin("segre:2:2"), seed=0, primes=1, seeds=1)
    out.append(("segre(2,2) s=7 f=2 gamma=2", (rep.s, rep.f, rep.gamma) == (7, 2, 2)))
    out.append(("segre(2,2) classified as (iv)", classify_fourfold(rep).cases == ["iv"]))
    rep = full_report(builtin("veronese:2:2"), seed=0, primes=1, seeds=1)
    out.append(("veronese(2,2) s=4 f=1", (rep.s, rep.f) == (4, 1)))
    rep = full_report(builtin("fourfold-p9"), seed=0, primes=1, seeds=1)
    out.append(("cubic 4-fold in P^9 non-defective", rep.delta == 0))
    q = ranks(CURVES["rnc4"]())
    out.append(("rational normal quartic ranks (6,6,4)", (q.n1, q.n2, q.n3) == (6, 6, 4)))
    C = CURVES["quintic"]()
    q = ranks(C)
    out.append(("quintic ranks (7,7,5)", (q.n1, q.n2, q.n3) == (7, 7, 5) and q.ok))
    out.append(("quintic branch at 0", branch_rank_sequence(C, 0).ranks == (2, 1, 1, 1)))
    return out


def run_command(argv: Sequence[str]) -> tuple[int, str]:
    """Run one CLI invocation; returns (exit status, text to print)."""
    try:
        args = _build_parser().parse_args(list(argv))
        if args.command == "invariants":
            return _cmd_invariants(args)
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "curve-ranks":
            return _cmd_curve(args)
        if args.command == "catalog":
            return _cmd_catalog(args)
        results = _selftest()
        lines = [f"{'PASS' if ok else 'FAIL'} {label}" for label, ok in results]
        return (EXIT_OK if all(ok for _, ok in results) else EXIT_INCONSISTENT), "\n".join(lines)
    except (UsageError, ManifestError) as exc:
        return EXIT_USAGE, f"error: {exc}"
    except (NotDefectiveError, ClassificationError) as exc:
        return EXIT_USAGE, f"rejected: {exc}"
    except SamplingError as exc:
        return EXIT_INCONSISTENT, f"inconsistent: {exc}"


def main(argv: Sequence[str] | None = None) -> int:
    try:
        status, text = run_command(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    stream = sys.stdout if status in (EXIT_OK, EXIT_INCONSISTENT) else sys.stderr
    print(text, file=stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
