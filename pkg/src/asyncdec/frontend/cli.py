"""Command-line front end.

Verbs: analyze (dependency structure of a generator function), simulate
(one trajectory), compose (parallel connection of two tables or bundles),
decompose (factor a system at a separated block), verify (run the theorem
suites).  Exit codes: 0 success / property holds, 1 property violated
(witness printed), 2 input error.

Reports go to stdout as human-readable text; `--out PATH` additionally
writes a machine-readable key=value document.  Output is byte-stable for
identical inputs and flags; `--stamp` opts into a timestamp line.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone

from ..boolfn import GeneratorFn, dependency_matrix, finest_partition, is_separated
from ..errors import AsyncDecError, NotSeparatedError
from ..semantics import run
from ..signals import BitVec
from ..systems import RegularSystem, decompose_system
from . import checks
from .dsl import compile_program, parse_dsl
from .fileio import (
    LoadError,
    format_signal,
    format_system,
    format_truth_table,
    load_rho,
    load_signal,
    load_system,
    load_truth_table,
    parse_truth_table,
    save_system,
)

_EXIT_OK = 0
_EXIT_VIOLATED = 1
_EXIT_INPUT = 2


def _load_phi(path: str) -> GeneratorFn:
    """A truth table if the file opens with its header, else the equation DSL."""
    with open(path) as f:
        text = f.read()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("n=") and " m=" in line:
            return parse_truth_table(text)
        return compile_program(parse_dsl(text))
    raise LoadError(f"{path}: empty file")


def _write_doc(path: str | None, pairs: list[tuple[str, str]]) -> None:
    if path is None:
        return
    with open(path, "w") as f:
        for key, value in pairs:
            f.write(f"{key}={value}\n")


def _blocks_text(blocks) -> str:
    return " | ".join("{" + ",".join(str(i) for i in b) + "}" for b in blocks)


def _cmd_analyze(args) -> int:
    phi = _load_phi(args.phi)
    dm = dependency_matrix(phi)
    part = finest_partition(phi)
    print(f"generator function: n={phi.n} m={phi.m}")
    print("dependency matrix (row i, column j; 1 = coordinate i depends on mu_j):")
    for row in dm.as_matrix():
        print("  " + "".join(str(b) for b in row))
    print(f"finest partition: {_blocks_text(part.blocks)}")
    print("permutation: " + ",".join(str(p) for p in part.permutation))
    doc = [("n", str(phi.n)), ("m", str(phi.m))]
    for i in range(1, phi.n + 1):
        for j in range(1, phi.n + 1):
            doc.append((f"depends.{i}.{j}", str(int(dm.depends(i, j)))))
    doc.append(("partition.blocks", "|".join(",".join(map(str, b)) for b in part.blocks)))
    doc.append(("partition.permutation", ",".join(map(str, part.permutation))))
    if len(part.blocks) == 1:
        print("no separated proper block: the dependency graph is one component")
        doc.append(("separated.blocks", "none"))
    else:
        for k, block in enumerate(part.blocks, start=1):
            verdict = is_separated(phi, block)
            certificate = "separated" if verdict else "NOT separated"
            print(f"block {{{','.join(map(str, block))}}}: {certificate}")
            doc.append((f"block.{k}", ",".join(map(str, block))))
            doc.append((f"block.{k}.separated", str(int(verdict))))
    _write_doc(args.out, doc)
    return _EXIT_OK


def _cmd_simulate(args) -> int:
    phi = _load_phi(args.phi)
    mu = _parse_state(args.init, phi.n)
    u = load_signal(args.input)
    rho = load_rho(args.rho)
    horizon = args.horizon
    if horizon is None:
        if u.horizon != rho.horizon:
            raise LoadError(
                f"input horizon {u.horizon} and schedule horizon {rho.horizon} differ; "
                f"pass --horizon to truncate"
            )
        horizon = u.horizon
    else:
        if horizon > min(u.horizon, rho.horizon):
            raise LoadError(
                f"--horizon {horizon} exceeds the loaded horizons "
                f"({u.horizon}, {rho.horizon}); signals cannot be extended"
            )
        u = u.truncated(horizon)
        rho = rho.truncated(horizon)
    traj = run(phi, mu, u, rho, horizon)
    print(traj.dump())
    print(f"signal: {format_signal(traj.signal)}")
    _write_doc(
        args.out,
        [("horizon", str(horizon)), ("signal", format_signal(traj.signal))]
        + [(f"omega.{k - 1}", str(s)) for k, s in enumerate(traj.states)],
    )
    return _EXIT_OK


def _parse_state(text: str, n: int) -> BitVec:
    if not set(text) <= {"0", "1"} or len(text) != n:
        raise LoadError(f"--init must be {n} bits, got {text!r}")
    return BitVec.from_string(text)


def _sniff_bundle(path: str) -> bool:
    with open(path) as f:
        for raw in f:
            line = raw.split("#", 1)[0].strip()
            if line:
                return line.startswith("[")
    return False


def _cmd_compose(args) -> int:
    if _sniff_bundle(args.first) != _sniff_bundle(args.second):
        raise LoadError("compose needs two truth tables or two system bundles")
    if _sniff_bundle(args.first):
        from ..systems import parallel_system

        combined = parallel_system(load_system(args.first), load_system(args.second))
        text = format_system(combined)
    else:
        from ..boolfn import parallel_fn

        combined_fn = parallel_fn(load_truth_table(args.first), load_truth_table(args.second))
        text = format_truth_table(combined_fn)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return _EXIT_OK


def _decompose_once(sys: RegularSystem, block, horizon, label: str, doc) -> tuple:
    result = decompose_system(sys, block, horizon)
    print(f"{label} block {{{','.join(map(str, sorted(block)))}}}:")
    print("  permutation: " + ",".join(map(str, result.partition.permutation)))
    print(f"  status: {result.status}")
    print(f"  phi0 product form: {'yes' if result.phi0_product_form else 'no'}")
    holds = result.product_condition.holds
    print(f"  schedule product condition: {'holds' if holds else 'fails'}")
    if not holds:
        u, mu, rb, rc = result.product_condition.witness
        print(f"  witness: mu={mu} u={format_signal(u)}")
        print(f"           rho'={rb}")
        print(f"           rho''={rc}")
    for u, own, hull in result.hull_sizes:
        print(f"  input {format_signal(u)}: own {own} states, hull {hull} states")
    doc.append((f"{label}.status", result.status))
    doc.append((f"{label}.phi0_product_form", str(int(result.phi0_product_form))))
    doc.append((f"{label}.product_condition", str(int(holds))))
    return result


def _cmd_decompose(args) -> int:
    sys_ = load_system(args.system)
    horizon = args.horizon if args.horizon is not None else sys_.horizon
    doc = [("n", str(sys_.n)), ("m", str(sys_.m)), ("horizon", str(horizon))]
    factors = []
    statuses = []
    if args.block:
        block = sorted(int(x) for x in args.block.split(","))
        result = _decompose_once(sys_, block, horizon, "step1", doc)
        factors = [result.first, result.second]
        statuses = [result.status]
    else:
        part = finest_partition(sys_.phi)
        print(f"finest partition: {_blocks_text(part.blocks)}")
        doc.append(
            ("partition.blocks", "|".join(",".join(map(str, b)) for b in part.blocks))
        )
        if len(part.blocks) == 1:
            print("no separated proper block: nothing to decompose")
            doc.append(("status", "indecomposable"))
            _write_doc(args.out, doc)
            return _EXIT_OK
        current = sys_
        labels = list(range(1, sys_.n + 1))
        for step, b in enumerate(part.blocks[:-1], start=1):
            positions = [labels.index(i) + 1 for i in b]
            result = _decompose_once(current, positions, horizon, f"step{step}", doc)
            factors.append(result.first)
            statuses.append(result.status)
            current = result.second
            labels = [i for i in labels if i not in b]
        factors.append(current)
    overall = "equal" if all(s == "equal" for s in statuses) else "strict-subset"
    print(f"overall: {overall} ({len(factors)} factors)")
    doc.append(("status", overall))
    doc.append(("factors", str(len(factors))))
    if args.emit:
        for k, factor in enumerate(factors, start=1):
            path = f"{args.emit}.factor{k}.sys"
            save_system(factor, path)
            print(f"wrote {path}")
    _write_doc(args.out, doc)
    return _EXIT_OK


_THM_ORDER = ("26", "27", "30", "32", "34", "example1")


def _cmd_verify(args) -> int:
    chosen = _THM_ORDER if args.thm == "all" else (args.thm,)
    reports = []
    for thm in chosen:
        if thm == "26":
            reports.append(checks.theorem26_suite(args.seed, args.cases))
        elif thm == "27":
            reports.append(checks.theorem27_suite(args.seed, args.cases))
        elif thm == "30":
            reports.append(checks.theorem30_exhaustive()[0])
        elif thm == "32":
            reports.append(checks.theorem32_suite(args.seed, args.cases))
        elif thm == "34":
            reports.append(checks.theorem34_suite(args.seed, max(2, args.cases // 5)))
        else:
            reports.append(checks.example1_suite())
    doc = [("seed", str(args.seed)), ("cases", str(args.cases))]
    ok = True
    for thm, report in zip(chosen, reports):
        print(report.summary())
        for line in report.details:
            print(f"  witness: {line}")
        doc.append((f"thm{thm}.cases", str(report.cases)))
        doc.append((f"thm{thm}.failures", str(report.failures)))
        doc.append((f"thm{thm}.verdict", "PASS" if report.ok else "FAIL"))
        ok = ok and report.ok
    print(f"overall: {'PASS' if ok else 'FAIL'}")
    doc.append(("overall", "PASS" if ok else "FAIL"))
    if args.stamp:
        stamp = datetime.now(timezone.utc).isoformat()
        print(f"stamp: {stamp}")
        doc.append(("stamp", stamp))
    _write_doc(args.out, doc)
    return _EXIT_OK if ok else _EXIT_VIOLATED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asyncdec",
        description="Analyze, simulate and decompose regular asynchronous systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="dependency matrix and finest partition")
    p.add_argument("--phi", required=True, help="truth table or equation file")
    p.add_argument("--out", help="write a machine-readable key=value report")
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("simulate", help="run one trajectory")
    p.add_argument("--phi", required=True, help="truth table or equation file")
    p.add_argument("--init", required=True, help="initial state bits")
    p.add_argument("--input", required=True, help="input signal file")
    p.add_argument("--rho", required=True, help="schedule file")
    p.add_argument("--horizon", type=int, help="truncate to this horizon")
    p.add_argument("--out", help="write a machine-readable key=value report")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("compose", help="parallel connection of two tables or bundles")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out", help="write the composition here instead of stdout")
    p.set_defaults(fn=_cmd_compose)

    p = sub.add_parser("decompose", help="factor a system at a separated block")
    p.add_argument("--system", required=True, help="system bundle file")
    p.add_argument("--block", help="comma-separated coordinates; default: finest partition, iterated")
    p.add_argument("--horizon", type=int, help="horizon for the realization comparison")
    p.add_argument("--emit", help="write factor bundles as PREFIX.factor<k>.sys")
    p.add_argument("--out", help="write a machine-readable key=value report")
    p.set_defaults(fn=_cmd_decompose)

    p = sub.add_parser("verify", help="run the theorem suites")
    p.add_argument("--thm", required=True, choices=_THM_ORDER + ("all",))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--stamp", action="store_true", help="append a timestamp line")
    p.add_argument("--out", help="write a machine-readable key=value report")
    p.set_defaults(fn=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except NotSeparatedError as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return _EXIT_VIOLATED
    except (AsyncDecError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
