"""Identity verifiers: skew-symmetry, shuffle Jacobi, fundamental identity.

Every bracket of generators collapses to a single generator, so each
identity reduces to an exact coefficient computation; a verdict of "pass"
always means the residual is identically zero in the coefficient ring, not
small.  Failing identities ship their exact residual for inspection.

Sweeps deduplicate tuples by sorted signature: the brackets are exactly
antisymmetric (itself verified exhaustively by the skew sweeps), so a
residual's vanishing depends only on the index multiset.  Every distinct
signature is still evaluated honestly, and the per-tuple entry points
compute residuals directly without the deduplication.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

from .algebra import (
    GenIndex,
    Term,
    bracket2,
    bracketn_closed,
    nested_coeff,
)
from .oracle import WordSum, word_act
from .ring import (
    LPoly,
    QModScalar,
    QMPoly,
    SCALAR_ZERO,
    Scalar,
    UniScalar,
    UPoly,
    qmod_from_mod,
)

__all__ = [
    "Shuffle",
    "IdentityReport",
    "SweepResult",
    "UnexpectedZero",
    "shuffles",
    "levi_civita",
    "check_skew",
    "sh_jacobi_residual",
    "fi_residual",
    "fi_counterexample_even",
    "deformed_jacobi2_residual",
    "q_jacobi2_residual",
    "sweep_skew",
    "sweep_sh_jacobi",
    "sample_tuples",
    "sweep_fi_find_nonzero",
    "sweep_deformed_jacobi2",
    "sweep_q_jacobi2",
]


class UnexpectedZero(ArithmeticError):
    """A residual that must not vanish came out zero."""


@dataclass(frozen=True)
class Shuffle:
    """A permutation of 1..2n-1 increasing on its first n and last n-1 slots."""

    sigma: tuple[int, ...]
    parity: int


@dataclass(frozen=True)
class IdentityReport:
    """Verdict for one identity instance; pass means residual exactly zero."""

    identity: str
    n: int
    indices: tuple[GenIndex, ...]
    residual: str
    verdict: bool

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "n": self.n,
            "tuple": list(self.indices),
            "residual": self.residual,
            "verdict": "pass" if self.verdict else "fail",
        }


@dataclass
class SweepResult:
    """Aggregate outcome of an identity sweep over many index tuples."""

    identity: str
    n: int
    params: dict
    checked: int = 0
    failures: list[IdentityReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@lru_cache(maxsize=None)
def shuffles(n: int) -> tuple[Shuffle, ...]:
    """All C(2n-1, n) signed block shuffles, lexicographic in the first block."""
    if n < 2:
        raise ValueError("shuffles need n >= 2")
    symbols = range(1, 2 * n)
    out = []
    for first in combinations(symbols, n):
        chosen = set(first)
        word = first + tuple(s for s in symbols if s not in chosen)
        inv = sum(
            1
            for i in range(len(word))
            for j in range(i + 1, len(word))
            if word[i] > word[j]
        )
        out.append(Shuffle(word, -1 if inv & 1 else 1))
    return tuple(out)


def levi_civita(js: Sequence[int]) -> int:
    """Sign of a sequence relative to sorted order; 0 on repeated entries."""
    s = list(js)
    if len(set(s)) != len(s):
        return 0
    inv = sum(
        1 for i in range(len(s)) for j in range(i + 1, len(s)) if s[i] > s[j]
    )
    return -1 if inv & 1 else 1


def _direct_term(indices: tuple[GenIndex, ...]) -> Term:
    # direct evaluation in the given argument order (no antisymmetry cache)
    if len(indices) == 2:
        return bracket2(*indices)
    return bracketn_closed(indices)


def check_skew(indices: Sequence[GenIndex]) -> IdentityReport:
    """Verify antisymmetry of the bracket on one index tuple.

    Every transposition must negate the directly evaluated bracket, and a
    tuple with repeated entries must vanish; both are checked without the
    sorted-signature cache so this sweep underwrites it.
    """
    idx = tuple(indices)
    n = len(idx)
    base = _direct_term(idx)
    if len(set(idx)) != n:
        ok = base.is_zero
        return IdentityReport(
            "skew-symmetry", n, idx, base.coeff.canonical() if not ok else "0", ok
        )
    for i in range(n):
        for j in range(i + 1, n):
            swapped = list(idx)
            swapped[i], swapped[j] = swapped[j], swapped[i]
            residual = _direct_term(tuple(swapped)).coeff + base.coeff
            if not residual.is_zero:
                return IdentityReport(
                    "skew-symmetry", n, idx, residual.canonical(), False
                )
    return IdentityReport("skew-symmetry", n, idx, "0", True)


def sh_jacobi_residual(n: int, indices: Sequence[GenIndex]) -> Scalar:
    """Signed shuffle sum of nested brackets on 2n-1 generators.

    All terms share the total index, so the residual is a single Scalar;
    the algebra is a shuffle-Jacobi n-algebra exactly when it vanishes.
    """
    idx = tuple(indices)
    if len(idx) != 2 * n - 1:
        raise ValueError(f"need 2n-1 = {2 * n - 1} indices, got {len(idx)}")
    total = SCALAR_ZERO
    for sh in shuffles(n):
        inner = tuple(idx[i - 1] for i in sh.sigma[:n])
        rest = tuple(idx[i - 1] for i in sh.sigma[n:])
        c = nested_coeff(inner, rest, 0)
        if c.is_zero:
            continue
        total = total + (c if sh.parity > 0 else -c)
    return total


def fi_residual(
    n: int, Y: Sequence[GenIndex], X: Sequence[GenIndex]
) -> Term:
    """Fundamental-identity residual [Y, [X]] - sum_k [X_1, .., [Y, X_k], .., X_n].

    Works for any n >= 2 (n = 2 is the plain Jacobi identity, which the
    weighted 2-bracket does not satisfy -- expected nonzero there).
    """
    ys = tuple(Y)
    xs = tuple(X)
    if len(ys) != n - 1 or len(xs) != n:
        raise ValueError(f"need |Y| = {n - 1} and |X| = {n}")
    acc = nested_coeff(xs, ys, len(ys))
    for k in range(n):
        inner = ys + (xs[k],)
        rest = xs[:k] + xs[k + 1 :]
        c = nested_coeff(inner, rest, k)
        if not c.is_zero:
            acc = acc - c
    return Term(acc, sum(ys) + sum(xs))


def fi_counterexample_even(
    n: int,
) -> tuple[tuple[GenIndex, ...], tuple[GenIndex, ...], Term]:
    """Construct the even-arity witness that kills the fundamental identity.

    Y = (L_-2, ..., L_-(n-1), L_{n(n-1)/2}), X = (L_0, ..., L_{n-1}); the
    residual must be nonzero, otherwise the algebra would be an n-Lie
    algebra on this tuple after all.
    """
    if n < 4 or n % 2:
        raise ValueError("counterexample construction needs even n >= 4")
    Y = tuple(-i - 1 for i in range(1, n - 1)) + (n * (n - 1) // 2,)
    X = tuple(range(n))
    res = fi_residual(n, Y, X)
    if res.is_zero:
        raise UnexpectedZero(f"fundamental identity unexpectedly holds at Y={Y}, X={X}")
    return Y, X, res


def deformed_jacobi2_residual(m: GenIndex, n: GenIndex, k: GenIndex) -> Scalar:
    """Weighted two-parameter Jacobi residual for the 2-bracket.

    (q^m + p^-m) [L_m, [L_n, L_k]] + cyclic, where both brackets carry their
    index-dependent weights and therefore collapse to structure constants.
    """
    total = SCALAR_ZERO
    for a, b, c in ((m, n, k), (n, k, m), (k, m, n)):
        pref = Scalar._raw(LPoly({(0, a): 1, (-a, 0): 1}) if a else LPoly.const(2), 0)
        inner = bracket2(b, c).coeff
        if inner.is_zero:
            continue
        outer = bracket2(a, b + c).coeff
        if outer.is_zero:
            continue
        total = total + pref * inner * outer
    return total


def q_jacobi2_residual(m: GenIndex, n: GenIndex, k: GenIndex) -> UniScalar:
    """One-parameter Jacobi residual after the p -> q limit.

    The outer bracket weights q^(2a-(b+c)), q^((b+c)-2a) are not those of
    the structure-constant bracket, so the nested expression is evaluated as
    a word sum on the symbolic module and specialized to p = q; the quotient
    by the target generator's action coefficient is the residual.
    """
    def q_mono(x: int, sign: int = 1) -> Scalar:
        return Scalar._raw(LPoly.monomial(0, x, coeff=sign), 0)

    words = WordSum._raw({})
    for a, b, c in ((m, n, k), (n, k, m), (k, m, n)):
        w1o, w2o = 2 * a - (b + c), (b + c) - 2 * a
        w1i, w2i = b - c, c - b
        # accumulate word by word: keys coincide when indices repeat
        for word, weight in (
            ((a, b, c), q_mono(w1o + w1i)),
            ((a, c, b), q_mono(w1o + w2i, -1)),
            ((b, c, a), q_mono(w2o + w1i, -1)),
            ((c, b, a), q_mono(w2o + w2i)),
        ):
            words = words + WordSum._raw({word: weight})
    v = word_act(words)
    if v.is_zero:
        return UniScalar.zero()
    if len(v.entries) != 1:
        raise ArithmeticError("graded word sum acts on several shifts")
    (shift, coeff), = v.entries.items()
    spec = qmod_from_mod(coeff)
    if spec.is_zero:
        return UniScalar.zero()
    # divide by the p -> q image of the L_shift action coefficient
    action = QModScalar(
        QMPoly({(shift, 0): 1}) - QMPoly({(shift, 2): 1}), 1
    )
    quotient = spec.exact_div(action)
    out: dict[tuple[int], int] = {}
    for (b, j), cval in quotient.num.terms.items():
        if j:
            raise ArithmeticError("residual depends on the symbolic level")
        out[(b,)] = cval
    return UniScalar._raw(UPoly._raw(out), quotient.e)


def _window_range(window: tuple[int, int]) -> range:
    lo, hi = window
    if lo > hi:
        raise ValueError("empty index window")
    return range(lo, hi + 1)


def sample_tuples(
    length: int, window: tuple[int, int], count: int, seed: int
) -> list[tuple[int, ...]]:
    """Deterministic seeded sample of index tuples from a window."""
    rng = random.Random(seed)
    lo, hi = window
    return [
        tuple(rng.randrange(lo, hi + 1) for _ in range(length)) for _ in range(count)
    ]


def sweep_skew(n: int, window: tuple[int, int]) -> SweepResult:
    """check_skew over every n-tuple in the window."""
    result = SweepResult("skew-symmetry", n, {"window": list(window)})
    for idx in product(_window_range(window), repeat=n):
        report = check_skew(idx)
        result.checked += 1
        if not report.verdict:
            result.failures.append(report)
    return result


def _sh_jacobi_failures(
    n: int, tuples: Iterable[tuple[int, ...]]
) -> tuple[int, list[tuple[int, ...]]]:
    checked = 0
    bad: list[tuple[int, ...]] = []
    verdicts: dict[tuple[int, ...], bool] = {}
    for idx in tuples:
        checked += 1
        key = tuple(sorted(idx))
        ok = verdicts.get(key)
        if ok is None:
            ok = sh_jacobi_residual(n, idx).is_zero
            verdicts[key] = ok
        if not ok:
            bad.append(idx)
    return checked, bad


def sweep_sh_jacobi(
    n: int,
    window: tuple[int, int] | None = None,
    tuples: Sequence[tuple[int, ...]] | None = None,
    samples: int | None = None,
    seed: int = 0,
    jobs: int = 1,
) -> SweepResult:
    """Shuffle-Jacobi residuals over a window, an explicit list, or a sample."""
    params: dict = {}
    if tuples is not None:
        todo: list[tuple[int, ...]] = [tuple(t) for t in tuples]
        params["tuples"] = len(todo)
    elif window is not None and samples:
        todo = sample_tuples(2 * n - 1, window, samples, seed)
        params.update({"window": list(window), "samples": samples, "seed": seed})
    elif window is not None:
        todo = list(product(_window_range(window), repeat=2 * n - 1))
        params["window"] = list(window)
    else:
        raise ValueError("provide a window or explicit tuples")

    result = SweepResult("sh-jacobi", n, params)
    if jobs > 1 and len(todo) > 256:
        from .sweep import parallel_chunks

        outcomes = parallel_chunks(_sh_jacobi_worker, n, todo, jobs)
    else:
        outcomes = [_sh_jacobi_failures(n, todo)]
    for checked, bad in outcomes:
        result.checked += checked
        for idx in sorted(bad):
            result.failures.append(
                IdentityReport(
                    "sh-jacobi", n, idx, sh_jacobi_residual(n, idx).canonical(), False
                )
            )
    return result


def _sh_jacobi_worker(args: tuple[int, list[tuple[int, ...]]]):
    n, chunk = args
    return _sh_jacobi_failures(n, chunk)


def sweep_fi_find_nonzero(
    n: int, window: tuple[int, int]
) -> tuple[tuple[int, ...], tuple[int, ...], Term]:
    """First (Y, X) pick in the window with a nonzero fundamental-identity residual.

    Raises UnexpectedZero if the whole window satisfies the identity, which
    would contradict the algebra being merely a shuffle-Jacobi algebra.
    """
    rng = _window_range(window)
    for Y in product(rng, repeat=n - 1):
        for X in product(rng, repeat=n):
            res = fi_residual(n, Y, X)
            if not res.is_zero:
                return Y, X, res
    raise UnexpectedZero(f"fundamental identity held on all of {window}")


def sweep_deformed_jacobi2(window: tuple[int, int]) -> SweepResult:
    """Weighted Jacobi residuals for the 2-bracket over a window cube."""
    result = SweepResult("pq-jacobi2", 2, {"window": list(window)})
    for m, n, k in product(_window_range(window), repeat=3):
        res = deformed_jacobi2_residual(m, n, k)
        result.checked += 1
        if not res.is_zero:
            result.failures.append(
                IdentityReport("pq-jacobi2", 2, (m, n, k), res.canonical(), False)
            )
    return result


def sweep_q_jacobi2(window: tuple[int, int]) -> SweepResult:
    """One-parameter Jacobi residuals over a window cube."""
    result = SweepResult("q-jacobi2", 2, {"window": list(window)})
    for m, n, k in product(_window_range(window), repeat=3):
        res = q_jacobi2_residual(m, n, k)
        result.checked += 1
        if not res.is_zero:
            result.failures.append(
                IdentityReport("q-jacobi2", 2, (m, n, k), res.canonical(), False)
            )
    return result
