"""Command-line entry point: ``planarkernel <subcommand> ...``.

Exit status is 0 on success, 1 when an invariant or declared bound fails,
and 2 on usage errors (bad flags, unreadable files, out-of-range parameters).
Artifacts go to standard output (or ``-o``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import generators
from .alber import alber_kernelize
from .baker import ParameterError, baker_approx
from .graph import GraphFormatError, GraphInvariantError, PlanarGraph, SpaceLedger, load_graph, serialize
from .instance import BoundViolation
from .oracles import OracleCapError, solve
from .regions import (
    DistanceConstants,
    DistancePropertyError,
    maximal_region_decomposition,
    verify_region_decomposition,
)
from .scheme import kernelize_ds_scheme, kernelize_vc_scheme, vc_anchor_set
from .treedecomp import TreeDecompositionError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    args: argparse.Namespace

    @property
    def ledger(self) -> bool:
        return bool(getattr(self.args, "ledger", False))


@dataclass
class Outcome:
    text: str
    status: int = EXIT_OK
    message: str = ""


def _epsilon(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if not 0 < eps <= 1:
        raise argparse.ArgumentTypeError("epsilon must lie in (0, 1]")
    return eps


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return value


def _read_graph(path: str) -> PlanarGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return load_graph(text)


def _ledger_lines(cfg: RunConfig, ledger: SpaceLedger) -> list[str]:
    return ledger.lines() if cfg.ledger else []


# ---------------------------------------------------------------------------
# subcommands


def _cmd_approx(cfg: RunConfig) -> Outcome:
    problem = "ds" if cfg.subcommand == "approx-ds" else "vc"
    G = _read_graph(cfg.args.instance)
    ledger = SpaceLedger(G.n)
    run = baker_approx(G, cfg.args.epsilon, problem, ledger)
    sol = list(run.solution)
    lines = [f"c approx {problem} epsilon {cfg.args.epsilon} d {run.d} size {len(sol)}"]
    lines += [str(v) for v in sol]
    lines += _ledger_lines(cfg, ledger)
    return Outcome("\n".join(lines) + "\n")


def _cmd_kernel_alber(cfg: RunConfig) -> Outcome:
    G = _read_graph(cfg.args.instance)
    ledger = SpaceLedger(G.n)
    K = alber_kernelize(G, ledger)
    # the gadget counts are the point of this kernel, so its ledger is always shown
    return Outcome(K.to_text(with_ledger=True))


def _cmd_kernel_region(cfg: RunConfig) -> Outcome:
    G = _read_graph(cfg.args.instance)
    ledger = SpaceLedger(G.n)
    build = kernelize_ds_scheme if cfg.subcommand == "kernel-ds-region" else kernelize_vc_scheme
    K = build(G, cfg.args.k, ledger)
    text = K.to_text(with_ledger=cfg.ledger)
    if not K.within_bound():
        return Outcome(text, EXIT_FAILURE, f"kernel has {K.n} vertices, declared bound {K.bound}")
    return Outcome(text)


def _read_anchors(path: str) -> list[int]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith(("c", "s")):
            try:
                out.extend(int(x) for x in line.split())
            except ValueError:
                raise UsageError(f"bad anchor line in {path}: {line!r}") from None
    return out


def _cmd_regions(cfg: RunConfig) -> Outcome:
    G = _read_graph(cfg.args.instance)
    c = DistanceConstants(cfg.args.cv, cfg.args.ce)
    ledger = SpaceLedger(G.n)
    if cfg.args.anchors == "auto":
        if c.c_E == 0:
            S = vc_anchor_set(G, baker_approx(G, 1, "vc", ledger).solution)
        else:
            S = sorted(baker_approx(G, 1, "ds", ledger).solution)
    else:
        S = _read_anchors(cfg.args.anchors)
    rd = maximal_region_decomposition(G, S, c, ledger)
    report = verify_region_decomposition(G, rd)
    lines = [f"c regions cv {c.c_V} ce {c.c_E} anchors {len(rd.anchors)} count {len(rd.regions)}"]
    lines.append("c anchors " + " ".join(map(str, sorted(rd.anchors))))
    lines += ["c check " + line.strip() for line in report.lines() if not line.startswith(" ")]
    lines += _ledger_lines(cfg, ledger)
    lines += rd.dump_lines(G)
    text = "\n".join(lines) + "\n"
    if not report.ok:
        return Outcome(text, EXIT_FAILURE, "region decomposition failed verification")
    return Outcome(text)


def _cmd_solve(cfg: RunConfig) -> Outcome:
    G = _read_graph(cfg.args.instance)
    res = solve(G, cfg.args.problem)
    lines = [f"c brute {cfg.args.problem} explored {res.explored}", f"s {res.optimum}"]
    lines += _ledger_lines(cfg, SpaceLedger(G.n))
    lines.append(" ".join(map(str, sorted(res.witness))))
    return Outcome("\n".join(lines) + "\n")


def _cmd_verify(cfg: RunConfig) -> Outcome:
    G = _read_graph(cfg.args.original)
    K = _read_graph(cfg.args.kernel)
    a = solve(G, cfg.args.problem).optimum
    b = solve(K, cfg.args.problem).optimum
    lines = [f"c verify {cfg.args.problem} original {a} kernel {b}"]
    lines += _ledger_lines(cfg, SpaceLedger(G.n))
    lines.append("equivalent" if a == b else "different")
    text = "\n".join(lines) + "\n"
    if a != b:
        return Outcome(text, EXIT_FAILURE, "optima differ")
    return Outcome(text)


def _cmd_gen(cfg: RunConfig) -> Outcome:
    a = cfg.args
    fam = a.family
    if fam in ("triangulation", "planar") and a.seed is None:
        raise UsageError(f"family {fam!r} needs an explicit --seed")
    need = {"grid": ("rows", "cols"), "star": ("n",), "path": ("n",), "cycle": ("n",),
            "empty": ("n",), "triangulation": ("n",), "planar": ("n",)}[fam]
    for name in need:
        if getattr(a, name) is None:
            raise UsageError(f"family {fam!r} needs --{name}")
    if fam == "grid":
        G = generators.grid(a.rows, a.cols)
    elif fam == "star":
        G = generators.star(a.n)
    elif fam == "path":
        G = generators.path(a.n)
    elif fam == "cycle":
        if a.n < 3:
            raise UsageError("a cycle needs at least 3 vertices")
        G = generators.cycle(a.n)
    elif fam == "empty":
        G = generators.empty(a.n)
    elif fam == "triangulation":
        G = generators.random_triangulation(a.n, a.seed)
    else:
        G = generators.random_planar(a.n, a.seed, a.keep)
    comments = [f"c gen {fam}" + (f" seed {a.seed}" if a.seed is not None else "")]
    comments += _ledger_lines(cfg, SpaceLedger(G.n))
    return Outcome(serialize(G, comments))


COMMANDS: dict[str, Callable[[RunConfig], Outcome]] = {
    "approx-ds": _cmd_approx,
    "approx-vc": _cmd_approx,
    "kernel-ds-alber": _cmd_kernel_alber,
    "kernel-ds-region": _cmd_kernel_region,
    "kernel-vc-region": _cmd_kernel_region,
    "regions": _cmd_regions,
    "solve-brute": _cmd_solve,
    "verify": _cmd_verify,
    "gen": _cmd_gen,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planarkernel", description="Approximation and kernelization for planar Dominating Set / Vertex Cover."
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--ledger", action="store_true", help="append per-stage space accounting")
        p.add_argument("-o", "--output", help="write the result here instead of stdout")
        return p

    for name, what in (("approx-ds", "dominating set"), ("approx-vc", "vertex cover")):
        p = add(name, f"(1+epsilon)-approximate {what}")
        p.add_argument("instance")
        p.add_argument("--epsilon", type=_epsilon, default=Fraction(1))
    p = add("kernel-ds-alber", "dominating set kernel by neighbourhood rules")
    p.add_argument("instance")
    for name in ("kernel-ds-region", "kernel-vc-region"):
        p = add(name, "region-based kernel")
        p.add_argument("instance")
        p.add_argument("--k", type=_nonnegative, default=None)
    p = add("regions", "maximal region decomposition")
    p.add_argument("instance")
    p.add_argument("--cv", type=_nonnegative, default=1)
    p.add_argument("--ce", type=_nonnegative, default=1)
    p.add_argument("--anchors", default="auto", help="file of anchor ids, or 'auto'")
    p = add("solve-brute", "exact optimum by exhaustive search")
    p.add_argument("instance")
    p.add_argument("--problem", choices=("ds", "vc"), required=True)
    p = add("verify", "compare optima of an instance and its kernel")
    p.add_argument("original")
    p.add_argument("kernel")
    p.add_argument("--problem", choices=("ds", "vc"), required=True)
    p = add("gen", "generate an instance")
    p.add_argument("family", choices=("grid", "star", "path", "cycle", "empty", "triangulation", "planar"))
    p.add_argument("--n", type=_nonnegative)
    p.add_argument("--rows", type=_nonnegative)
    p.add_argument("--cols", type=_nonnegative)
    p.add_argument("--seed", type=int)
    p.add_argument("--keep", type=float, default=0.6)
    return parser


def dispatch(cfg: RunConfig) -> Outcome:
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        return Outcome("", EXIT_USAGE, str(exc))
    except (ParameterError, OracleCapError) as exc:
        return Outcome("", EXIT_USAGE, str(exc))
    except (
        GraphFormatError,
        GraphInvariantError,
        BoundViolation,
        DistancePropertyError,
        TreeDecompositionError,
    ) as exc:
        return Outcome("", EXIT_FAILURE, str(exc))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(args.subcommand, args)
    out = dispatch(cfg)
    if out.text:
        if args.output:
            Path(args.output).write_text(out.text)
        else:
            sys.stdout.write(out.text)
    if out.message:
        print(f"planarkernel: {out.message}", file=sys.stderr)
    return out.status


if __name__ == "__main__":
    sys.exit(main())
