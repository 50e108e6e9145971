"""Named check suites driving the full desk-scale verification run.

Each check returns a list of plain result dicts with the fixed shape
{"kind", "input", "residual", "verdict"} so reports serialize to stable
JSON.  All checks are pure and deterministic for a fixed seed.
"""
from __future__ import annotations

from itertools import combinations, permutations, product
from typing import Callable

from . import algebra, identities, oracle, subalgebra
from .ring import classical_value, pq_number, q_number, specialize_pq

CheckFn = Callable[[dict], list[dict]]

DESK_SH_WINDOWS = {3: (-2, 2), 4: (-1, 2)}
SH_SAMPLE_COUNT = 200


def _entry(kind: str, inp: dict, residual: str, ok: bool) -> dict:
    return {
        "kind": kind,
        "input": inp,
        "residual": residual,
        "verdict": "pass" if ok else "fail",
    }


def check_oscillator(cfg: dict) -> list[dict]:
    report = oracle.osc_relations_check()
    worst = next((r for _, r, ok in report.entries if not ok), "0")
    return [
        _entry("oscillator-relations", {"relations": len(report.entries)}, worst, report.ok)
    ]


def check_bracket2(cfg: dict) -> list[dict]:
    w = cfg.get("bracket2_window", 4)
    jac_w = cfg.get("jacobi_window", 3)
    out = []

    bad = []
    for m, n in product(range(-w, w + 1), repeat=2):
        lhs = oracle.extract_structure_constant(oracle.bracket2_def(m, n))
        if lhs != algebra.bracket2(m, n):
            bad.append((m, n))
    out.append(
        _entry(
            "bracket2-defining-vs-closed",
            {"window": [-w, w], "pairs": (2 * w + 1) ** 2},
            "0" if not bad else str(bad[0]),
            not bad,
        )
    )

    bad = []
    for m, n in product(range(-w, w + 1), repeat=2):
        r = algebra.bracket2(n, m).coeff + algebra.bracket2(m, n).coeff
        if not r.is_zero:
            bad.append(((m, n), r.canonical()))
    out.append(
        _entry(
            "bracket2-skew",
            {"window": [-w, w]},
            "0" if not bad else bad[0][1],
            not bad,
        )
    )

    for name, sweep in (
        ("pq-jacobi2", identities.sweep_deformed_jacobi2((-jac_w, jac_w))),
        ("q-jacobi2", identities.sweep_q_jacobi2((-jac_w, jac_w))),
    ):
        out.append(
            _entry(
                name,
                {"window": [-jac_w, jac_w], "tuples": sweep.checked},
                "0" if sweep.ok else sweep.failures[0].residual,
                sweep.ok,
            )
        )
    return out


def check_closed_vs_recursive(cfg: dict) -> list[dict]:
    out = []
    w3 = cfg.get("closed_n3_window", 3)
    bad = None
    count = 0
    for t in product(range(-w3, w3 + 1), repeat=3):
        count += 1
        rec = oracle.extract_structure_constant(oracle.bracketn_def(t))
        if rec != algebra.bracketn_closed(t):
            bad = t
            break
    out.append(
        _entry(
            "closed-vs-recursive-n3",
            {"window": [-w3, w3], "tuples": count},
            "0" if bad is None else str(bad),
            bad is None,
        )
    )

    wd = cfg.get("closed_distinct_window", 2)
    values = range(-wd, wd + 1)
    for n in cfg.get("closed_arities", (4, 5)):
        bad = None
        count = 0
        for t in permutations(values, n):
            count += 1
            rec = oracle.extract_structure_constant(oracle.bracketn_def(t))
            if rec != algebra.bracketn_closed(t):
                bad = t
                break
        out.append(
            _entry(
                f"closed-vs-recursive-n{n}",
                {"window": [-wd, wd], "distinct_tuples": count},
                "0" if bad is None else str(bad),
                bad is None,
            )
        )

    for n in cfg.get("closed_arities", (4, 5)):
        witnesses = [tuple(range(n)), tuple(range(-n + 1, 1)), tuple(range(-1, n - 1))]
        signs = {algebra.derive_sign(n, w) for w in witnesses}
        out.append(
            _entry(
                f"sign-consistency-n{n}",
                {"witnesses": len(witnesses)},
                "0" if len(signs) == 1 else str(sorted(signs)),
                len(signs) == 1,
            )
        )
    return out


def check_sh_jacobi(cfg: dict) -> list[dict]:
    out = []
    jobs = cfg.get("jobs", 1)
    for n, window in cfg.get("sh_windows", DESK_SH_WINDOWS).items():
        sweep = identities.sweep_sh_jacobi(n, window=window, jobs=jobs)
        out.append(
            _entry(
                f"sh-jacobi-n{n}",
                {"window": list(window), "tuples": sweep.checked},
                "0" if sweep.ok else sweep.failures[0].residual,
                sweep.ok,
            )
        )
    if cfg.get("sh_sampled_arity", 5):
        n = cfg.get("sh_sampled_arity", 5)
        seed = cfg.get("seed", 0)
        samples = cfg.get("sh_samples", SH_SAMPLE_COUNT)
        sweep = identities.sweep_sh_jacobi(
            n, window=(-2, 2), samples=samples, seed=seed, jobs=jobs
        )
        out.append(
            _entry(
                f"sh-jacobi-n{n}-sampled",
                {"window": [-2, 2], "samples": samples, "seed": seed},
                "0" if sweep.ok else sweep.failures[0].residual,
                sweep.ok,
            )
        )
    return out


def check_not_n_lie(cfg: dict) -> list[dict]:
    out = []
    Y, X, res = identities.sweep_fi_find_nonzero(3, (-2, 2))
    out.append(
        _entry(
            "fi-nonzero-exists-n3",
            {"window": [-2, 2], "Y": list(Y), "X": list(X)},
            res.coeff.canonical(),
            not res.is_zero,
        )
    )
    for n in cfg.get("counterexample_arities", (4, 6)):
        Y, X, res = identities.fi_counterexample_even(n)
        out.append(
            _entry(
                f"fi-counterexample-n{n}",
                {"Y": list(Y), "X": list(X)},
                res.coeff.canonical(),
                not res.is_zero,
            )
        )
    return out


def check_limits(cfg: dict) -> list[dict]:
    out = []
    w = cfg.get("limits_window", 5)
    bad = None
    for m, n in product(range(-w, w + 1), repeat=2):
        spec = specialize_pq(algebra.bracket2(m, n).coeff)
        if spec != q_number(m - n) or classical_value(spec) != m - n:
            bad = (m, n)
            break
    out.append(
        _entry(
            "limits-bracket2",
            {"window": [-w, w]},
            "0" if bad is None else str(bad),
            bad is None,
        )
    )

    bad = None
    for n, w in cfg.get("limits_odd", {3: 2, 5: 3}).items():
        for t in combinations(range(-w, w + 1), n):
            closed = specialize_pq(algebra.bracketn_closed(t).coeff)
            rec = specialize_pq(
                oracle.extract_structure_constant(oracle.bracketn_def(t)).coeff
            )
            if closed != rec:
                bad = (n, t)
                break
        if bad:
            break
    out.append(
        _entry(
            "limits-odd-arity",
            {"arities": sorted(cfg.get("limits_odd", {3: 2, 5: 3}))},
            "0" if bad is None else str(bad),
            bad is None,
        )
    )
    return out


def check_subalgebras(cfg: dict) -> list[dict]:
    out = []
    for n in cfg.get("canonical_arities", (3, 4, 5)):
        basis = subalgebra.canonical_basis(n)
        report = subalgebra.check_candidate(basis, n)
        coeff = subalgebra.canonical_coeff(n)
        ok = (
            report.closed
            and bool(report.fi_pass)
            and bool(report.iso_canonical)
            and not coeff.is_zero
            and report.ideal_at is not None
        )
        out.append(
            _entry(
                f"subalgebra-canonical-n{n}",
                {
                    "basis": list(basis),
                    "isomorphic_to": subalgebra.CanonicalNLie(n).describe(),
                },
                "0" if ok else "verdict mismatch",
                ok,
            )
        )

    W = cfg.get("search_window", 3)
    if not W:
        return out
    try:
        result = subalgebra.search(W, 3)
        shape_ok = all(
            r.iso_canonical and r.ideal_at == sum(r.indices) for r in result.found
        )
        out.append(
            _entry(
                "subalgebra-search-n3",
                {
                    "window": W,
                    "found": [list(r.indices) for r in result.found],
                    "size4_checked": result.extra_checked,
                },
                "0" if shape_ok else "shape mismatch",
                shape_ok and not result.extra_passing,
            )
        )
    except subalgebra.UnexpectedSubalgebra as exc:
        out.append(_entry("subalgebra-search-n3", {"window": W}, str(exc), False))
    return out


def check_regression_pins(cfg: dict) -> list[dict]:
    out = []
    pin = algebra.bracket3_closed(0, 1, 2)
    expected = "1*p^0*q^-2 + -1*p^2*q^0"
    ok = pin.coeff.canonical() == expected and pin.index == 3
    out.append(
        _entry("pin-bracket3-012", {"expected": expected}, pin.coeff.canonical(), ok)
    )
    val = pq_number(-1)
    expected = "-1*p^1*q^-1"
    ok = val.canonical() == expected
    out.append(_entry("pin-pq-number-minus1", {"expected": expected}, val.canonical(), ok))
    return out


DESK_CHECKS: tuple[tuple[str, CheckFn], ...] = (
    ("oscillator", check_oscillator),
    ("bracket2", check_bracket2),
    ("closed-vs-recursive", check_closed_vs_recursive),
    ("sh-jacobi", check_sh_jacobi),
    ("not-n-lie", check_not_n_lie),
    ("limits", check_limits),
    ("subalgebras", check_subalgebras),
    ("pins", check_regression_pins),
)

SMOKE_CONFIG = {
    "bracket2_window": 2,
    "jacobi_window": 2,
    "closed_n3_window": 1,
    "closed_distinct_window": 2,
    "closed_arities": (4,),
    "sh_windows": {3: (-1, 1)},
    "sh_sampled_arity": 0,
    "counterexample_arities": (4,),
    "limits_window": 2,
    "limits_odd": {3: 2},
    "canonical_arities": (3,),
    "search_window": 2,
}


def run_suite(level: str, seed: int = 0, jobs: int = 1) -> list[dict]:
    """Run the named check suite; returns the flat, ordered result list."""
    if level == "desk":
        cfg: dict = {}
    elif level == "smoke":
        cfg = dict(SMOKE_CONFIG)
    else:
        raise ValueError(f"unknown level {level!r}")
    cfg["seed"] = seed
    cfg["jobs"] = jobs
    results: list[dict] = []
    for _, fn in DESK_CHECKS:
        results.extend(fn(cfg))
    return results
