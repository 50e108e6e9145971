"""Command-line front end: brackets, identity sweeps, subalgebra search.

Exit codes: 0 when every check passes, 1 when any check fails (the exact
residual is printed), 2 on usage errors.  JSON reports are byte-identical
for identical configurations (including seed), independent of the worker
count; wall time is therefore reported on stderr only.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Sequence

from . import __version__, algebra, identities, oracle, subalgebra, suite
from .ring import PoleAtOne, classical_value, specialize_pq


@dataclass
class RunConfig:
    """Parsed invocation: one command plus its parameters."""

    command: str
    n: int | None = None
    window: int | None = None
    indices: tuple[int, ...] | None = None
    y: tuple[int, ...] | None = None
    x: tuple[int, ...] | None = None
    counterexample: bool = False
    expect_nonzero: bool = False
    samples: int | None = None
    seed: int = 0
    jobs: int = 1
    level: str = "desk"
    fmt: str = "text"
    output: str | None = None

    def params(self) -> dict:
        out: dict = {"seed": self.seed}
        for key in ("n", "window", "samples", "level"):
            val = getattr(self, key)
            if val is not None and (key != "level" or self.command == "verify all"):
                out[key] = val
        for key in ("indices", "y", "x"):
            val = getattr(self, key)
            if val is not None:
                out[key] = list(val)
        if self.counterexample:
            out["counterexample"] = True
        if self.expect_nonzero:
            out["expect_nonzero"] = True
        return out


@dataclass
class SuiteReport:
    """Full run outcome; `wall_time` never enters the JSON payload."""

    command: str
    params: dict
    results: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r["verdict"] == "pass")

    @property
    def failed(self) -> int:
        return len(self.results) - self.passed

    def to_json(self) -> dict:
        return {
            "version": __version__,
            "command": self.command,
            "params": self.params,
            "results": self.results,
            "summary": {"pass": self.passed, "fail": self.failed},
        }


def _indices_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad index list {text!r}") from None


_LIST_FLAGS = {"--indices", "--y", "--x"}


def _merge_list_flags(argv: Sequence[str]) -> list[str]:
    # join "--indices -2,-1,0" into "--indices=-2,-1,0" so argparse does not
    # mistake a leading negative index for an option switch
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _LIST_FLAGS:
            val = next(it, None)
            out.append(tok if val is None else f"{tok}={val}")
        else:
            out.append(tok)
    return out


def parse_args(argv: Sequence[str]) -> RunConfig:
    parser = argparse.ArgumentParser(
        prog="pqvw",
        description="Exact checks for the two-parameter deformed Virasoro-Witt n-algebra",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", metavar="PATH", default=None, help="write the JSON report here (atomic)")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for tuple sweeps")
        p.add_argument("--seed", type=int, default=0, help="seed for sampled sweeps")

    p = sub.add_parser("bracket", help="evaluate one bracket of generators")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--indices", type=_indices_arg, required=True)
    common(p)

    p = sub.add_parser("oracle-check", help="oscillator relations and closed-vs-recursive sweep")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--window", type=int, default=2)
    common(p)

    v = sub.add_parser("verify", help="identity verification")
    vsub = v.add_subparsers(dest="verify_command", required=True)

    p = vsub.add_parser("skew", help="antisymmetry sweep")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--window", type=int, required=True)
    common(p)

    p = vsub.add_parser("sh-jacobi", help="shuffle Jacobi identity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--indices", type=_indices_arg, default=None, help="explicit 2n-1 indices")
    p.add_argument("--samples", type=int, default=None)
    common(p)

    p = vsub.add_parser("fi", help="fundamental identity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--counterexample", action="store_true",
                   help="use the built-in even-arity counterexample (passes when nonzero)")
    p.add_argument("--y", type=_indices_arg, default=None, help="n-1 derivation indices")
    p.add_argument("--x", type=_indices_arg, default=None, help="n bracket indices")
    p.add_argument("--expect-nonzero", action="store_true",
                   help="invert the expectation: pass when the residual is nonzero")
    common(p)

    p = vsub.add_parser("jacobi2", help="weighted Jacobi identities for the 2-bracket")
    p.add_argument("--window", type=int, default=3)
    common(p)

    p = vsub.add_parser("limits", help="one-parameter and classical limits")
    p.add_argument("--window", type=int, default=5)
    common(p)

    p = vsub.add_parser("all", help="the full check suite")
    p.add_argument("--level", choices=("desk", "smoke"), default="desk")
    common(p)

    s = sub.add_parser("subalgebra", help="subalgebra checks and search")
    ssub = s.add_subparsers(dest="sub_command", required=True)

    p = ssub.add_parser("search", help="bounded window search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--window", type=int, required=True)
    common(p)

    p = ssub.add_parser("canonical", help="the canonical n-dimensional subalgebra")
    p.add_argument("--n", type=int, required=True)
    common(p)

    p = ssub.add_parser("check", help="verdicts for an explicit index set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--indices", type=_indices_arg, required=True)
    common(p)

    ns = parser.parse_args(_merge_list_flags(argv))

    command = ns.command
    if command == "verify":
        command = f"verify {ns.verify_command}"
    elif command == "subalgebra":
        command = f"subalgebra {ns.sub_command}"

    cfg = RunConfig(
        command=command,
        n=getattr(ns, "n", None),
        window=getattr(ns, "window", None),
        indices=getattr(ns, "indices", None),
        y=getattr(ns, "y", None),
        x=getattr(ns, "x", None),
        counterexample=getattr(ns, "counterexample", False),
        expect_nonzero=getattr(ns, "expect_nonzero", False),
        samples=getattr(ns, "samples", None),
        seed=ns.seed,
        jobs=ns.jobs,
        level=getattr(ns, "level", "desk"),
        fmt=ns.format,
        output=ns.output,
    )

    # semantic validation (argparse handles syntax; these are exit-code-2 too)
    if cfg.command == "bracket":
        if cfg.n < 2 or len(cfg.indices) != cfg.n:
            parser.error(f"bracket needs exactly n = {cfg.n} indices")
    elif cfg.command == "verify sh-jacobi":
        if cfg.n < 2:
            parser.error("sh-jacobi needs n >= 2")
        if cfg.indices is not None:
            if len(cfg.indices) != 2 * cfg.n - 1:
                parser.error(f"sh-jacobi needs 2n-1 = {2 * cfg.n - 1} indices")
        elif cfg.window is None:
            parser.error("sh-jacobi needs --window or --indices")
    elif cfg.command == "verify fi":
        if cfg.counterexample:
            if cfg.n < 4 or cfg.n % 2:
                parser.error("--counterexample needs even n >= 4")
        else:
            if cfg.y is None or cfg.x is None:
                parser.error("verify fi needs --counterexample or both --y and --x")
            if len(cfg.y) != cfg.n - 1 or len(cfg.x) != cfg.n:
                parser.error(f"fi needs |Y| = {cfg.n - 1} and |X| = {cfg.n}")
    elif cfg.command == "verify skew" and cfg.n < 2:
        parser.error("skew needs n >= 2")
    elif cfg.command == "oracle-check" and cfg.n is not None and cfg.n < 3:
        parser.error("the recursive sweep needs n >= 3")
    elif cfg.command.startswith("subalgebra") and cfg.n < 3:
        parser.error("subalgebra checks need n >= 3")
    return cfg


def _bracket_results(cfg: RunConfig) -> list[dict]:
    idx = cfg.indices
    term = algebra.bracket2(*idx) if cfg.n == 2 else algebra.bracketn_closed(idx)
    spec = specialize_pq(term.coeff)
    try:
        classical = str(classical_value(spec))
    except PoleAtOne:
        classical = "pole at q=1"
    return [
        {
            "kind": "bracket",
            "input": {"n": cfg.n, "indices": list(idx)},
            "residual": "0",
            "verdict": "pass",
            "coefficient": term.coeff.canonical(),
            "index": term.index,
            "q_limit": spec.canonical(),
            "classical": classical,
         }
    ]


def _oracle_results(cfg: RunConfig) -> list[dict]:
    results = suite.check_oscillator({})
    if cfg.n:
        w = cfg.window
        bad = None
        count = 0
        tuples = (
            product(range(-w, w + 1), repeat=cfg.n)
            if cfg.n == 3
            else permutations(range(-w, w + 1), cfg.n)
        )
        for t in tuples:
            count += 1
            rec = oracle.extract_structure_constant(oracle.bracketn_def(t))
            if rec != algebra.bracketn_closed(t):
                bad = t
                break
        results.append(
            {
                "kind": f"closed-vs-recursive-n{cfg.n}",
                "input": {"window": [-w, w], "tuples": count},
                "residual": "0" if bad is None else str(bad),
                "verdict": "pass" if bad is None else "fail",
            }
        )
    return results


def _skew_results(cfg: RunConfig) -> list[dict]:
    sweep = identities.sweep_skew(cfg.n, (-cfg.window, cfg.window))
    return [
        {
            "kind": f"skew-n{cfg.n}",
            "input": {"window": [-cfg.window, cfg.window], "tuples": sweep.checked},
            "residual": "0" if sweep.ok else sweep.failures[0].residual,
            "verdict": "pass" if sweep.ok else "fail",
        }
    ]


def _sh_jacobi_results(cfg: RunConfig) -> list[dict]:
    if cfg.indices is not None:
        residual = identities.sh_jacobi_residual(cfg.n, cfg.indices)
        ok = residual.is_zero
        return [
            {
                "kind": f"sh-jacobi-n{cfg.n}",
                "input": {"indices": list(cfg.indices)},
                "residual": residual.canonical(),
                "verdict": "pass" if ok else "fail",
            }
        ]
    window = (-cfg.window, cfg.window)
    sweep = identities.sweep_sh_jacobi(
        cfg.n, window=window, samples=cfg.samples, seed=cfg.seed, jobs=cfg.jobs
    )
    inp: dict = {"window": list(window), "tuples": sweep.checked}
    if cfg.samples:
        inp.update({"samples": cfg.samples, "seed": cfg.seed})
    return [
        {
            "kind": f"sh-jacobi-n{cfg.n}",
            "input": inp,
            "residual": "0" if sweep.ok else sweep.failures[0].residual,
            "verdict": "pass" if sweep.ok else "fail",
        }
    ]


def _fi_results(cfg: RunConfig) -> list[dict]:
    if cfg.counterexample:
        Y, X, res = identities.fi_counterexample_even(cfg.n)
        return [
            {
                "kind": f"fi-counterexample-n{cfg.n}",
                "input": {"Y": list(Y), "X": list(X), "expected": "nonzero"},
                "residual": res.coeff.canonical(),
                "verdict": "pass" if not res.is_zero else "fail",
            }
        ]
    res = identities.fi_residual(cfg.n, cfg.y, cfg.x)
    ok = (not res.is_zero) if cfg.expect_nonzero else res.is_zero
    return [
        {
            "kind": f"fi-n{cfg.n}",
            "input": {
                "Y": list(cfg.y),
                "X": list(cfg.x),
                "expected": "nonzero" if cfg.expect_nonzero else "zero",
            },
            "residual": res.coeff.canonical(),
            "verdict": "pass" if ok else "fail",
        }
    ]


def _jacobi2_results(cfg: RunConfig) -> list[dict]:
    window = (-cfg.window, cfg.window)
    out = []
    for name, sweep in (
        ("pq-jacobi2", identities.sweep_deformed_jacobi2(window)),
        ("q-jacobi2", identities.sweep_q_jacobi2(window)),
    ):
        out.append(
            {
                "kind": name,
                "input": {"window": list(window), "tuples": sweep.checked},
                "residual": "0" if sweep.ok else sweep.failures[0].residual,
                "verdict": "pass" if sweep.ok else "fail",
            }
        )
    return out


def _limits_results(cfg: RunConfig) -> list[dict]:
    return suite.check_limits({"limits_window": cfg.window})


def _subalgebra_results(cfg: RunConfig) -> list[dict]:
    if cfg.command == "subalgebra canonical":
        return suite.check_subalgebras({"canonical_arities": (cfg.n,), "search_window": 0})
    if cfg.command == "subalgebra search":
        try:
            result = subalgebra.search(cfg.window, cfg.n)
        except subalgebra.UnexpectedSubalgebra as exc:
            return [
                {
                    "kind": f"subalgebra-search-n{cfg.n}",
                    "input": {"window": cfg.window},
                    "residual": str(exc),
                    "verdict": "fail",
                }
            ]
        return [
            {
                "kind": f"subalgebra-search-n{cfg.n}",
                "input": {
                    "window": cfg.window,
                    "found": [list(r.indices) for r in result.found],
                    "extra_dim_checked": result.extra_checked,
                },
                "residual": "0",
                "verdict": "pass",
            }
        ]
    report = subalgebra.check_candidate(cfg.indices, cfg.n)
    return [
        {
            "kind": f"subalgebra-check-n{cfg.n}",
            "input": {"indices": list(cfg.indices)},
            "residual": "0" if report.is_subalgebra else json.dumps(report.to_json(), sort_keys=True),
            "verdict": "pass" if report.is_subalgebra else "fail",
        }
    ]


def run(cfg: RunConfig) -> tuple[SuiteReport, int]:
    """Execute one parsed command; returns the report and the exit code."""
    started = time.monotonic()
    if cfg.command == "bracket":
        results = _bracket_results(cfg)
    elif cfg.command == "oracle-check":
        results = _oracle_results(cfg)
    elif cfg.command == "verify skew":
        results = _skew_results(cfg)
    elif cfg.command == "verify sh-jacobi":
        results = _sh_jacobi_results(cfg)
    elif cfg.command == "verify fi":
        results = _fi_results(cfg)
    elif cfg.command == "verify jacobi2":
        results = _jacobi2_results(cfg)
    elif cfg.command == "verify limits":
        results = _limits_results(cfg)
    elif cfg.command == "verify all":
        results = suite.run_suite(cfg.level, seed=cfg.seed, jobs=cfg.jobs)
    elif cfg.command in ("subalgebra search", "subalgebra canonical", "subalgebra check"):
        results = _subalgebra_results(cfg)
    else:  # pragma: no cover - argparse prevents this
        raise ValueError(f"unknown command {cfg.command!r}")
    report = SuiteReport(
        command=cfg.command,
        params=cfg.params(),
        results=results,
        wall_time=time.monotonic() - started,
    )
    return report, (0 if report.failed == 0 else 1)


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".pqvw-report-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def emit(report: SuiteReport, cfg: RunConfig) -> None:
    payload = json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    if cfg.output:
        _atomic_write(cfg.output, payload)
    if cfg.fmt == "json":
        if not cfg.output:
            sys.stdout.write(payload)
    else:
        for r in report.results:
            status = "PASS" if r["verdict"] == "pass" else "FAIL"
            line = f"[{status}] {r['kind']}"
            extra = {k: v for k, v in r.items() if k not in ("kind", "verdict")}
            if r["verdict"] != "pass" or r["kind"] == "bracket":
                line += " " + json.dumps(extra, sort_keys=True)
            elif extra.get("input"):
                line += " " + json.dumps(extra["input"], sort_keys=True)
            print(line)
        print(f"summary: {report.passed} passed, {report.failed} failed")
    print(f"wall time: {report.wall_time:.2f}s", file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> None:
    cfg = parse_args(sys.argv[1:] if argv is None else list(argv))
    report, code = run(cfg)
    emit(report, cfg)
    sys.exit(code)


if __name__ == "__main__":  # pragma: no cover
    main()
