"""Command-line front end.

Exit codes: 0 success (or the checked property holds), 1 computed a
falsifying or negative answer, 2 usage, I/O or validation error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .algebroid import cochain_complex, nijenhuis_check
from .chern import RootSeries, formal, verify_rr_identity
from .chern.rootseries import todd_series
from .errors import (AlgRRError, DescriptorIOError, ParseError, SchemaError)
from .index import (algebroid_rr_index, average_euler, connes_comparison, foliated_rr_index,
                    positivity_obstruction)
from .io import (eval_class_expr, load_bundle_table, load_descriptor, parse_class_expr,
                 serialize_result)
from .linalg import rank

ENV_CUTOFF = "ALGRR_CUTOFF_DEFAULT"
OK, FAILS, ERROR = 0, 1, 2
FILE_COMMANDS = ("cohomology", "index", "euler", "check", "positivity")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    inputs: tuple = ()
    expression: str | None = None
    cutoff: int | None = None
    output: str = "human"
    jobs: int = 1

    def __post_init__(self):
        if self.cutoff is not None and self.cutoff < 1:
            raise UsageError("cutoff must be at least 1")
        if self.output not in ("human", "json"):
            raise UsageError(f"unknown output mode {self.output!r}")


@dataclass(frozen=True)
class Outcome:
    code: int
    record: dict
    text: str


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _perturbation(text):
    try:
        deg, value = text.split(":", 1)
        return int(deg), Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("expected DEGREE:VALUE, e.g. 2:1/10") from None


def _bundle_decl(text):
    try:
        name, r = text.split("=", 1)
        return name.strip(), _positive_int(r)
    except (ValueError, argparse.ArgumentTypeError):
        raise argparse.ArgumentTypeError(f"expected NAME=RANK, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _output_flags(parser, default):
    parser.add_argument("--json", dest="output", action="store_const", const="json",
                        default=default, help="emit one canonical JSON record")
    parser.add_argument("--output", choices=("human", "json"), default=default)


def build_parser() -> argparse.ArgumentParser:
    # the subcommand copies must not reset a flag given before the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _output_flags(common, argparse.SUPPRESS)

    parser = _Parser(prog="algrr", description="Exact Riemann-Roch computations for Lie "
                     "algebroids and foliations.")
    _output_flags(parser, None)
    sub = parser.add_subparsers(dest="subcommand", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("verify-identity", parents=[common],
                       help="check the Todd/Euler identity for a formal rank-K bundle")
    p.add_argument("--rank", type=_positive_int, required=True)
    p.add_argument("--cutoff", type=_positive_int)
    p.add_argument("--perturb-todd", type=_perturbation, metavar="DEGREE:VALUE",
                   help="replace one per-root Todd coefficient (falsification control)")

    p = sub.add_parser("expand", parents=[common], help="expand a class expression")
    p.add_argument("expression")
    p.add_argument("--bundles", metavar="FILE", help='JSON table {"name": rank}')
    p.add_argument("--bundle", type=_bundle_decl, action="append", default=[],
                   metavar="NAME=RANK")
    p.add_argument("--cutoff", type=_positive_int)

    helps = {
        "cohomology": "Koszul cohomology dimensions",
        "index": "algebroid or foliated index",
        "euler": "average Euler character",
        "check": "validate a presentation (and its complex structure)",
        "positivity": "positivity obstruction for a tangential line bundle",
    }
    for name in FILE_COMMANDS:
        p = sub.add_parser(name, parents=[common], help=helps[name])
        p.add_argument("files", nargs="+", metavar="FILE")
        p.add_argument("--jobs", type=_positive_int, default=1,
                       help="evaluate several descriptors in parallel")
        if name == "index":
            p.add_argument("--cutoff", type=_positive_int)
        if name == "cohomology":
            p.add_argument("--matrices", action="store_true",
                           help="include the differential matrices")

    p = sub.add_parser("compare-connes", parents=[common],
                       help="compare the algebroid and Connes prefactors")
    p.add_argument("--k", type=_positive_int, required=True, help="real leaf dimension")
    return parser


def env_cutoff() -> int | None:
    raw = os.environ.get(ENV_CUTOFF)
    if raw is None or raw.strip() == "":
        return None
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"{ENV_CUTOFF} must be an integer, got {raw!r}") from None
    if v < 1:
        raise UsageError(f"{ENV_CUTOFF} must be at least 1, got {v}")
    return v


# evaluators --------------------------------------------------------------------


def _verify(args, cutoff) -> Outcome:
    k = args.rank
    cutoff = cutoff or 2 * k
    if cutoff < k:
        raise UsageError(f"cutoff {cutoff} is below the rank {k}")
    todd = None
    if args.perturb_todd:
        deg, value = args.perturb_todd
        base = todd_series()
        todd = RootSeries.from_function(lambda n: value if n == deg else base.coeff(n),
                                        f"todd[{deg}:={value}]")
    report = verify_rr_identity(k, cutoff, todd)
    bad = report.first_discrepancy
    record = {"command": "verify-identity", "rank": k, "cutoff": cutoff, "holds": report.holds,
              "first_discrepancy": None if bad is None else
              {"monomial": bad[0], "lhs": bad[1], "rhs": bad[2]}}
    if report.holds:
        text = f"rank {k}, cutoff {cutoff}: identity holds"
    else:
        text = f"rank {k}, cutoff {cutoff}: identity FAILS at {bad[0]} (lhs {bad[1]}, rhs {bad[2]})"
    return Outcome(OK if report.holds else FAILS, record, text)


def _expand(args, cutoff) -> Outcome:
    env = load_bundle_table(args.bundles) if args.bundles else {}
    for name, r in args.bundle:
        env[name] = formal(name, r)
    if cutoff is None:
        cutoff = max((b.rank for b in env.values()), default=1)
    ast = parse_class_expr(args.expression)
    s = eval_class_expr(ast, env, cutoff)
    record = {"command": "expand", "expression": args.expression, "cutoff": cutoff, "series": s}
    return Outcome(OK, record, str(s))


def _cohomology(desc, opts) -> Outcome:
    if desc.kind != "cohomology":
        raise SchemaError(f"cohomology needs a cohomology descriptor, got {desc.kind!r}", "/kind")
    prob = desc.payload
    cx = cochain_complex(prob.presentation, prob.representation)
    ranks = [rank(D) for D in cx.differentials]
    dims = [cx.dims[k] - ranks[k] - (ranks[k - 1] if k else 0) for k in range(len(cx.dims))]
    record = {"command": "cohomology", "dims": dims, "cochain_dims": cx.dims}
    if opts.get("matrices"):
        record["differentials"] = [[list(r) for r in D] for D in cx.differentials]
    return Outcome(OK, record, "H^* dims: " + " ".join(map(str, dims)))


def _index(desc, opts) -> Outcome:
    prob = desc.payload
    if desc.kind == "algebroid-index":
        cutoff = opts.get("cutoff") or prob.cutoff
        if cutoff < prob.algebroid.rank:
            raise UsageError(f"cutoff {cutoff} is below the top degree {prob.algebroid.rank}")
        res = algebroid_rr_index(prob.algebroid, prob.bundle, prob.p, prob.functional, cutoff)
        record = {"command": "index", "kind": desc.kind, "value": res.value, "p": res.p,
                  "rank": res.rank, "raw_prefactor": res.raw_prefactor}
        text = f"index = {res.value}  (p = {res.p}, raw prefactor {res.raw_prefactor})"
        return Outcome(OK, record, text)
    if desc.kind == "foliated-index":
        value = foliated_rr_index(prob.foliation, prob.bundle, prob.p)
        record = {"command": "index", "kind": desc.kind, "value": value, "p": prob.p,
                  "bundle": prob.bundle}
        return Outcome(OK, record, f"foliated index = {value}  (p = {prob.p}, {prob.bundle})")
    raise SchemaError(f"index needs an algebroid-index or foliated-index descriptor, "
                      f"got {desc.kind!r}", "/kind")


def _foliation_of(desc, command):
    if desc.kind not in ("foliated-index", "euler", "positivity"):
        raise SchemaError(f"{command} needs a foliation descriptor, got {desc.kind!r}", "/kind")
    return desc.payload.foliation


def _euler(desc, opts) -> Outcome:
    value = average_euler(_foliation_of(desc, "euler"))
    return Outcome(OK, {"command": "euler", "value": value}, str(value))


def _positivity(desc, opts) -> Outcome:
    if desc.kind != "positivity":
        raise SchemaError(f"positivity needs a positivity descriptor, got {desc.kind!r}", "/kind")
    v = positivity_obstruction(desc.payload.foliation, desc.payload.bundle)
    record = {"command": "positivity", "verdict": v.verdict, "witness": v.witness}
    return Outcome(FAILS if v.verdict == "NotPositive" else OK, record,
                   f"{v.verdict} (witness {v.witness})")


def _check(desc, opts) -> Outcome:
    if desc.kind != "cohomology":
        raise SchemaError(f"check needs a cohomology descriptor, got {desc.kind!r}", "/kind")
    prob = desc.payload
    report = prob.report
    record = {"command": "check", "valid": report.valid, "flat": prob.flat,
              "report": report.as_dict(), "nijenhuis": None}
    lines = ["presentation valid" if report.valid else "presentation INVALID"]
    for label, items in (("antisymmetry", report.antisymmetry), ("jacobi", report.jacobi),
                         ("anchor", report.anchor), ("J^2 = -1", report.complex_structure)):
        for item in items:
            lines.append(f"  {label} violated at {tuple(item)}")
    lines.append("representation flat" if prob.flat else "representation NOT flat")
    ok = report.valid and prob.flat
    if prob.presentation.J is not None and not report.complex_structure:
        nj = nijenhuis_check(prob.presentation)
        record["nijenhuis"] = nj
        if nj.integrable:
            lines.append("J integrable")
        else:
            lines.append(f"J NOT integrable: N(e{nj.violating_pair[0]}, e{nj.violating_pair[1]})"
                         f" = {[str(x) for x in nj.value]}")
            ok = False
    return Outcome(OK if ok else FAILS, record, "\n".join(lines))


def _connes(args, cutoff) -> Outcome:
    res = connes_comparison(args.k)
    record = {"command": "compare-connes", "k": res.k, "lhs": res.lhs, "rhs": res.rhs,
              "holds": res.holds, "ratio": res.ratio}
    text = (f"k = {res.k}: {res.lhs} {'=' if res.holds else '!='} {res.rhs}; "
            f"algebroid/Connes ratio {res.ratio}")
    return Outcome(OK if res.holds else FAILS, record, text)


FILE_EVALUATORS = {"cohomology": _cohomology, "index": _index, "euler": _euler,
                   "check": _check, "positivity": _positivity}


def _error_outcome(exc, path=None) -> Outcome:
    kind = {DescriptorIOError: "IoError"}.get(type(exc), type(exc).__name__)
    err = {"type": kind, "message": str(exc)}
    if isinstance(exc, SchemaError):
        err["pointer"] = exc.pointer
    if isinstance(exc, ParseError):
        err.update(line=exc.line, column=exc.column, expected=sorted(exc.expected))
    if path is not None:
        err["file"] = path
    prefix = f"{path}: " if path else ""
    return Outcome(ERROR, {"error": err}, f"{prefix}{kind}: {exc}")


def evaluate_file(command: str, path: str, opts: dict) -> Outcome:
    """Load and evaluate one descriptor; never raises for engine errors."""
    try:
        desc = load_descriptor(path, strict=(command != "check"))
        return FILE_EVALUATORS[command](desc, opts)
    except (AlgRRError, UsageError) as e:
        return _error_outcome(e, path)


def _run_files(args, cutoff) -> list[Outcome]:
    opts = {"cutoff": cutoff, "matrices": getattr(args, "matrices", False)}
    if args.jobs > 1 and len(args.files) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(evaluate_file, args.subcommand, f, opts) for f in args.files]
            return [f.result() for f in futures]
    return [evaluate_file(args.subcommand, f, opts) for f in args.files]


def _write(stream, text):
    stream.write(text)
    if not text.endswith("\n"):
        stream.write("\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        real_stderr, sys.stderr = sys.stderr, stderr
        try:
            args = parser.parse_args(argv)
        finally:
            sys.stderr = real_stderr
        config = RunConfig(args.subcommand, tuple(getattr(args, "files", ())),
                           getattr(args, "expression", None),
                           getattr(args, "cutoff", None) or env_cutoff(),
                           args.output or "human", getattr(args, "jobs", 1))
    except UsageError as e:
        _write(stderr, f"algrr: error: {e}")
        return ERROR
    except SystemExit as e:  # --help
        return OK if e.code in (0, None) else ERROR

    if config.subcommand in FILE_COMMANDS:
        outcomes = _run_files(args, config.cutoff)
        code = max(o.code for o in outcomes)
        for o in outcomes:
            if o.code == ERROR:
                _write(stderr, f"algrr: {o.text}")
        if config.output == "json":
            if len(outcomes) == 1:
                record = outcomes[0].record
            else:
                record = {"command": config.subcommand,
                          "results": [dict(o.record, file=f) for o, f in zip(outcomes, config.inputs)]}
            _write(stdout, serialize_result(record))
        else:
            for o, f in zip(outcomes, config.inputs):
                if o.code == ERROR:
                    continue
                _write(stdout, f"{f}: {o.text}" if len(outcomes) > 1 else o.text)
        return code

    handler = {"verify-identity": _verify, "expand": _expand,
               "compare-connes": _connes}[config.subcommand]
    try:
        outcome = handler(args, config.cutoff)
    except (AlgRRError, UsageError) as e:
        outcome = _error_outcome(e)
        _write(stderr, f"algrr: {outcome.text}")
        if config.output == "json":
            _write(stdout, serialize_result(outcome.record))
        return ERROR
    _write(stdout, serialize_result(outcome.record) if config.output == "json" else outcome.text)
    return outcome.code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
