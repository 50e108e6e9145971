"""Closed-form bracket engine for the deformed Virasoro-Witt generators.

The antisymmetric n-argument bracket of generators L_m collapses to a single
generator with an exactly computable coefficient:

    [L_{i_1}, ..., L_{i_n}] = c(i_1, ..., i_n) * L_{i_1 + ... + i_n}

For n = 2 the coefficient is -(q p^-1)^m [n-m]_{p,q}; for n >= 3 it is a
signed generalized Vandermonde determinant in monomials of p and q divided
by (q - p^-1)^(n-1).  The overall sign for n >= 4 has no closed expression
here; it is calibrated once per arity against the recursive operator
definition (see :mod:`pqvw.oracle`) and frozen in a table.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Sequence

from .ring import (
    LPoly,
    SCALAR_ONE,
    SCALAR_ZERO,
    Scalar,
    pq_number,
)

GenIndex = int

__all__ = [
    "GenIndex",
    "Term",
    "OpSum",
    "RecursionWeights",
    "BadArity",
    "InconsistentSign",
    "bracket2",
    "bracket3_closed",
    "vandermonde_det",
    "bracketn_closed",
    "recursion_weights",
    "derive_sign",
    "sign_of",
    "known_signs",
    "bracket_coeff",
    "nested_coeff",
    "sort_with_sign",
    "bracket_multilinear",
]


class BadArity(ValueError):
    """Bracket arity outside the supported range."""


class InconsistentSign(ArithmeticError):
    """Recursive and closed forms disagree by something other than a sign."""


@dataclass(frozen=True, eq=False)
class Term:
    """A structure constant attached to a generator: coeff * L_index.

    All zero terms compare equal regardless of their index, so functions may
    keep the grading index (sum of inputs) on vanishing brackets without
    breaking equality tests.
    """

    coeff: Scalar
    index: GenIndex

    @classmethod
    def zero(cls) -> "Term":
        return cls(SCALAR_ZERO, 0)

    @property
    def is_zero(self) -> bool:
        return self.coeff.is_zero

    def __eq__(self, other) -> bool:
        if not isinstance(other, Term):
            return NotImplemented
        if self.coeff.is_zero and other.coeff.is_zero:
            return True
        return self.index == other.index and self.coeff == other.coeff

    def __hash__(self) -> int:
        if self.coeff.is_zero:
            return hash(("Term", "zero"))
        return hash(("Term", self.index, self.coeff))

    def canonical(self) -> str:
        return f"({self.coeff.canonical()}) * L_{self.index}"

    def __repr__(self) -> str:
        return f"Term({self.canonical()})"


class OpSum:
    """Finite formal combination of generators: index -> Scalar coefficient."""

    __slots__ = ("entries",)

    def __init__(self, entries: dict[GenIndex, Scalar] | None = None):
        d: dict[GenIndex, Scalar] = {}
        if entries:
            for i, c in entries.items():
                if not c.is_zero:
                    d[i] = c
        self.entries = d

    @classmethod
    def _raw(cls, d: dict[GenIndex, Scalar]) -> "OpSum":
        self = object.__new__(cls)
        self.entries = d
        return self

    @classmethod
    def generator(cls, m: GenIndex, coeff: Scalar = SCALAR_ONE) -> "OpSum":
        return cls({m: coeff})

    @classmethod
    def from_term(cls, t: Term) -> "OpSum":
        return cls({t.index: t.coeff})

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def items(self):
        return self.entries.items()

    def __add__(self, other: "OpSum") -> "OpSum":
        d = dict(self.entries)
        for i, c in other.entries.items():
            nc = d.get(i)
            nc = c if nc is None else nc + c
            if nc.is_zero:
                d.pop(i, None)
            else:
                d[i] = nc
        return OpSum._raw(d)

    def scale(self, c: Scalar) -> "OpSum":
        if c.is_zero:
            return OpSum._raw({})
        return OpSum._raw({i: v * c for i, v in self.entries.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, OpSum):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self) -> str:
        inner = " + ".join(
            f"({self.entries[i].canonical()})*L_{i}" for i in sorted(self.entries)
        )
        return f"OpSum({inner or '0'})"


@dataclass(frozen=True)
class RecursionWeights:
    """Exponent weights (x, y) of the arity-lowering recursion prefactor."""

    x: int
    y: int


def recursion_weights(n: int) -> RecursionWeights:
    """Weights for reducing an n-bracket to (n-1)-brackets, n >= 4.

    Even n uses (n/2, 0); odd n uses ((n-1)/2, -1).  The 3-bracket is the
    recursion base and has its own cyclic definition.
    """
    if n < 4:
        raise BadArity(f"recursion weights need n >= 4, got {n}")
    if n % 2 == 0:
        return RecursionWeights(n // 2, 0)
    return RecursionWeights((n - 1) // 2, -1)


def sort_with_sign(seq: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Sorted copy of distinct entries plus the parity of the sorting permutation."""
    s = list(seq)
    inv = 0
    for i in range(len(s)):
        ai = s[i]
        for j in range(i + 1, len(s)):
            if ai > s[j]:
                inv += 1
    return tuple(sorted(s)), (-1 if inv & 1 else 1)


def bracket2(m: GenIndex, n: GenIndex) -> Term:
    """Weighted 2-bracket: [L_m, L_n] = -(q p^-1)^m [n-m]_{p,q} L_{m+n}."""
    mono = Scalar._raw(LPoly.monomial(-m, m, coeff=-1), 0)
    return Term(mono * pq_number(n - m), m + n)


def bracket3_closed(m: GenIndex, n: GenIndex, k: GenIndex) -> Term:
    """3-bracket in determinant form.

    -(p q^-1)^(m+n+k) / (q - p^-1)^2 times the 3x3 determinant with rows
    p^-2i, p^-i q^i, q^2i over the columns i in (m, n, k), attached to
    L_{m+n+k}.  Written out explicitly as a cofactor expansion so it can
    cross-check the generic determinant path.
    """
    rows = ((-2, 0), (-1, 1), (0, 2))
    det: dict[tuple[int, int], int] = {}
    for perm, sgn in (
        ((m, n, k), 1),
        ((m, k, n), -1),
        ((n, m, k), -1),
        ((n, k, m), 1),
        ((k, m, n), 1),
        ((k, n, m), -1),
    ):
        a = sum(r[0] * i for r, i in zip(rows, perm))
        b = sum(r[1] * i for r, i in zip(rows, perm))
        c = det.get((a, b), 0) + sgn
        if c:
            det[(a, b)] = c
        else:
            del det[(a, b)]
    s = m + n + k
    pref = LPoly.monomial(s, -s, coeff=-1)
    num = (LPoly(det) * pref).exact_div(Scalar.DIVISOR**2)
    return Term(Scalar._raw(num, 0), s)


@lru_cache(maxsize=None)
def _perms_with_sign(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    out = []
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        out.append((perm, -1 if inv & 1 else 1))
    return tuple(out)


def vandermonde_det(indices: Sequence[GenIndex]) -> LPoly:
    """Generalized Vandermonde determinant behind the closed n-bracket.

    The n x n matrix has entry(t, j) = p^((t - 2*floor((n-1)/2)) * i_j)
    * q^(t * i_j) for rows t = 0..n-1.  Every entry is a monomial, so the
    determinant is expanded exactly over permutations.
    """
    n = len(indices)
    if n < 3:
        raise BadArity(f"determinant form needs n >= 3, got {n}")
    off = 2 * ((n - 1) // 2)
    d: dict[tuple[int, int], int] = {}
    for perm, sgn in _perms_with_sign(n):
        a = 0
        b = 0
        for t in range(n):
            i = indices[perm[t]]
            a += (t - off) * i
            b += t * i
        c = d.get((a, b), 0) + sgn
        if c:
            d[(a, b)] = c
        else:
            del d[(a, b)]
    return LPoly._raw(d)


# Overall sign of the closed form per arity, calibrated against the
# recursive definition.  Write-once per key; plain dict assignment is
# atomic, so concurrent readers never observe a torn value.
_SIGNS: dict[int, int] = {3: -1}


def _signfree_closed_coeff(indices: tuple[GenIndex, ...]) -> Scalar:
    n = len(indices)
    s = sum(indices)
    w = ((n - 1) // 2) * s
    det = vandermonde_det(indices)
    num = (det * LPoly.monomial(w, -w)).exact_div(Scalar._divisor_pow(n - 1))
    return Scalar._raw(num, 0)


def derive_sign(n: int, witness: Sequence[GenIndex] | None = None) -> int:
    """Calibrate sign(n) against the recursive bracket on one witness tuple.

    The quotient of the recursively evaluated structure constant by the
    sign-free closed form must be +1 or -1; anything else would mean the
    determinant formula does not reproduce the recursion.
    """
    if n < 3:
        raise BadArity(f"sign is defined for n >= 3, got {n}")
    if n == 3:
        return -1
    key = tuple(witness) if witness is not None else tuple(range(n))
    if len(key) != n or len(set(key)) != n:
        raise ValueError("witness must consist of n distinct indices")
    base = _signfree_closed_coeff(key)
    if base.is_zero:
        raise InconsistentSign(f"degenerate witness {key}: closed form vanishes")
    from .oracle import bracketn_def, extract_structure_constant

    rec = extract_structure_constant(bracketn_def(key))
    ratio = rec.coeff.exact_div(base)
    if ratio == SCALAR_ONE:
        sign = 1
    elif ratio == -SCALAR_ONE:
        sign = -1
    else:
        raise InconsistentSign(
            f"recursive/closed ratio at {key} is {ratio.canonical()}, not +-1"
        )
    cached = _SIGNS.setdefault(n, sign)
    if cached != sign:
        raise InconsistentSign(f"sign({n}) changed between witnesses")
    return sign


def sign_of(n: int) -> int:
    """Frozen closed-form sign for arity n, deriving and caching on demand."""
    got = _SIGNS.get(n)
    if got is None:
        got = derive_sign(n)
    return got


def known_signs() -> dict[int, int]:
    """Snapshot of the calibrated sign table."""
    return dict(_SIGNS)


def bracketn_closed(indices: Sequence[GenIndex]) -> Term:
    """Closed-form n-bracket for n >= 3.

    sign(n) / (q - p^-1)^(n-1) * (p q^-1)^(floor((n-1)/2) * sum) times the
    generalized Vandermonde determinant, attached to L_sum.  Exact division
    by (q - p^-1)^(n-1) is performed explicitly, so a failure (impossible if
    the closed form is right) raises NotDivisible rather than passing
    silently.  Repeated indices short-circuit to the zero term.
    """
    t = tuple(indices)
    n = len(t)
    if n < 3:
        raise BadArity(f"closed form needs n >= 3, got {n} (use bracket2)")
    s = sum(t)
    if len(set(t)) != n:
        return Term(SCALAR_ZERO, s)
    return Term(_signfree_closed_coeff(t).scale(sign_of(n)), s)


@lru_cache(maxsize=None)
def _sorted_coeff(t: tuple[GenIndex, ...]) -> Scalar:
    # t is strictly increasing with len >= 2
    if len(t) == 2:
        return bracket2(*t).coeff
    return bracketn_closed(t).coeff


@lru_cache(maxsize=None)
def _sorted_pair_coeff(inner: tuple[GenIndex, ...], outer: tuple[GenIndex, ...]) -> Scalar:
    return _sorted_coeff(inner) * _sorted_coeff(outer)


def bracket_coeff(indices: Sequence[GenIndex]) -> Scalar:
    """Structure constant of [L_(i1), ..., L_(in)] for any argument order.

    Sorts the arguments and looks up a cached coefficient, applying the
    parity of the sorting permutation; brackets are exactly antisymmetric
    (verified independently by the skew-symmetry sweeps), so this is an
    exact evaluation, not an approximation.
    """
    t = tuple(indices)
    if len(t) < 2:
        raise BadArity("brackets need at least two arguments")
    if len(set(t)) != len(t):
        return SCALAR_ZERO
    st, sign = sort_with_sign(t)
    c = _sorted_coeff(st)
    return c if sign > 0 else -c


def nested_coeff(
    inner: Sequence[GenIndex], rest: Sequence[GenIndex], pos: int
) -> Scalar:
    """Coefficient of [rest[:pos], [inner], rest[pos:]] as nested brackets.

    The inner bracket collapses to a single generator at index sum(inner);
    the outer bracket then collapses again.  Products of the two cached
    coefficients are themselves cached, which makes identity sweeps cheap.
    """
    inner = tuple(inner)
    if len(set(inner)) != len(inner):
        return SCALAR_ZERO
    outer = tuple(rest[:pos]) + (sum(inner),) + tuple(rest[pos:])
    if len(set(outer)) != len(outer):
        return SCALAR_ZERO
    si, sgn_i = sort_with_sign(inner)
    so, sgn_o = sort_with_sign(outer)
    c = _sorted_pair_coeff(si, so)
    return c if sgn_i * sgn_o > 0 else -c


def bracket_multilinear(args: Sequence[OpSum]) -> OpSum:
    """Extend the n-bracket to formal combinations by multilinearity."""
    n = len(args)
    if n < 2:
        raise BadArity("multilinear bracket needs at least two slots")
    out: dict[GenIndex, Scalar] = {}
    for combo in product(*(list(a.items()) for a in args)):
        idx = tuple(i for i, _ in combo)
        c = bracket_coeff(idx)
        if c.is_zero:
            continue
        for _, w in combo:
            c = c * w
        s = sum(idx)
        acc = out.get(s)
        acc = c if acc is None else acc + c
        if acc.is_zero:
            out.pop(s, None)
        else:
            out[s] = acc
    return OpSum._raw(out)
