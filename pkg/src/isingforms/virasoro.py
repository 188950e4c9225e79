"""Virasoro highest weight modules with exact rational arithmetic.

Conventions used throughout the package:

  * bracket: [L(m), L(n)] = (m - n) L(m+n) + ((m^3 - m)/12) delta_{m+n,0} ell,
    where ell is the central charge scalar.
  * A PBW monomial is a weakly decreasing tuple (n1, ..., nk) of positive
    integers and stands for L(-n1) ... L(-nk) v, acting on the highest weight
    vector v with L(0) v = h v and L(n) v = 0 for n > 0. The empty tuple is v
    itself. The level of a monomial is n1 + ... + nk.
  * The contravariant (Shapovalov) form is fixed by <v, v> = 1 and by L(n)
    being adjoint to L(-n). Degenerate directions of that form span the
    maximal proper submodule, so graded dimensions of the irreducible quotient
    are ranks of the per-level Gram matrices.

All coefficients are fractions.Fraction; nothing here ever touches floats.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .intmat import frac_det, frac_solve

Monomial = tuple[int, ...]


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass Fraction, int or str")
    return Fraction(x)


@dataclass(frozen=True)
class CentralParams:
    """Central charge and highest weight of a Verma module."""

    ell: Fraction
    h: Fraction

    def __post_init__(self):
        object.__setattr__(self, "ell", _as_fraction(self.ell))
        object.__setattr__(self, "h", _as_fraction(self.h))


def bracket(m: int, n: int) -> tuple[int, Fraction]:
    """Structure constants of [L(m), L(n)].

    Returns (linear, central): the coefficient of L(m+n) and the rational
    multiplier of ell. The central part is (m^3 - m)/12 when m + n = 0 and
    zero otherwise; the caller substitutes its own ell.
    """
    central = Fraction(m**3 - m, 12) if m + n == 0 else Fraction(0)
    return m - n, central


def partitions(level: int) -> list[Monomial]:
    """All PBW monomials of the given level, in descending lexicographic order."""
    if level < 0:
        return []
    if level == 0:
        return [()]
    out = []

    def rec(remaining, cap, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(remaining, cap), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(level, level, [])
    return out


class VermaVector:
    """A finite rational combination of PBW monomials in one Verma module."""

    __slots__ = ("params", "terms")

    def __init__(self, params: CentralParams, terms: dict[Monomial, Fraction] | None = None):
        self.params = params
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def lowest(cls, params: CentralParams) -> "VermaVector":
        return cls(params, {(): Fraction(1)})

    @classmethod
    def monomial(cls, params: CentralParams, modes: Iterable[int]) -> "VermaVector":
        modes = tuple(modes)
        if any(m <= 0 for m in modes) or list(modes) != sorted(modes, reverse=True):
            raise ValueError(f"not a normal ordered monomial: {modes}")
        return cls(params, {modes: Fraction(1)})

    def coefficient(self, modes: Monomial) -> Fraction:
        return self.terms.get(tuple(modes), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def level(self) -> int | None:
        """Common level of all terms; None for the zero vector."""
        levels = {sum(m) for m in self.terms}
        if not levels:
            return None
        if len(levels) > 1:
            raise ValueError("vector is not homogeneous")
        return levels.pop()

    def __add__(self, other: "VermaVector") -> "VermaVector":
        if self.params != other.params:
            raise ValueError("mixed module parameters")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return VermaVector(self.params, terms)

    def __sub__(self, other: "VermaVector") -> "VermaVector":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "VermaVector":
        s = _as_fraction(scalar)
        return VermaVector(self.params, {m: s * c for m, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, VermaVector)
                and self.params == other.params and self.terms == other.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for modes in sorted(self.terms, reverse=True):
            body = "".join(f"L(-{n})" for n in modes) or "1"
            bits.append(f"{self.terms[modes]}*{body}v")
        return " + ".join(bits)


@dataclass(frozen=True)
class GradedBasis:
    """Pivot monomials of one graded piece of an irreducible quotient.

    pivots are chosen greedily in descending lexicographic order so that the
    Gram matrix on them stays invertible; gram is that matrix.
    """

    params: CentralParams
    level: int
    pivots: tuple[Monomial, ...]
    gram: tuple[tuple[Fraction, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.pivots)


class _Engine:
    """Straightening and pairing cache for one CentralParams."""

    def __init__(self, params: CentralParams):
        self.params = params
        self._apply_cache: dict[tuple[int, Monomial], dict[Monomial, Fraction]] = {}
        self._pair_cache: dict[tuple[Monomial, Monomial], Fraction] = {}
        self._gram_cache: dict[int, list[list[Fraction]]] = {}
        self._basis_cache: dict[int, GradedBasis] = {}

    def apply_monomial(self, n: int, modes: Monomial) -> dict[Monomial, Fraction]:
        key = (n, modes)
        hit = self._apply_cache.get(key)
        if hit is not None:
            return hit
        params = self.params
        if not modes:
            if n > 0:
                out: dict[Monomial, Fraction] = {}
            elif n == 0:
                out = {(): params.h} if params.h else {}
            else:
                out = {(-n,): Fraction(1)}
        elif n < 0 and -n >= modes[0]:
            out = {(-n,) + modes: Fraction(1)}
        else:
            # L(n) L(-a) = L(-a) L(n) + (n + a) L(n - a) + delta_{n,a} (n^3-n)/12 ell
            a = modes[0]
            tail = modes[1:]
            out = {}
            for mono, c in self.apply_monomial(n, tail).items():
                for mono2, c2 in self.apply_monomial(-a, mono).items():
                    out[mono2] = out.get(mono2, Fraction(0)) + c * c2
            f = Fraction(n + a)
            if f:
                for mono, c in self.apply_monomial(n - a, tail).items():
                    out[mono] = out.get(mono, Fraction(0)) + f * c
            if n == a:
                cc = Fraction(n**3 - n, 12) * params.ell
                if cc:
                    out[tail] = out.get(tail, Fraction(0)) + cc
            out = {m: c for m, c in out.items() if c}
        self._apply_cache[key] = out
        return out

    def apply(self, n: int, v: VermaVector) -> VermaVector:
        terms: dict[Monomial, Fraction] = {}
        for modes, c in v.terms.items():
            for mono, c2 in self.apply_monomial(n, modes).items():
                terms[mono] = terms.get(mono, Fraction(0)) + c * c2
        return VermaVector(self.params, terms)

    def pairing_monomials(self, a: Monomial, b: Monomial) -> Fraction:
        if sum(a) != sum(b):
            return Fraction(0)
        key = (a, b)
        hit = self._pair_cache.get(key)
        if hit is not None:
            return hit
        # <L(-n1)...L(-nk) v, w> peels from the left, so L(n1) lands on w first.
        current = {b: Fraction(1)}
        for n in a:
            nxt: dict[Monomial, Fraction] = {}
            for modes, c in current.items():
                for mono, c2 in self.apply_monomial(n, modes).items():
                    nxt[mono] = nxt.get(mono, Fraction(0)) + c * c2
            current = nxt
        out = current.get((), Fraction(0))
        self._pair_cache[key] = out
        return out

    def pairing(self, a: VermaVector, b: VermaVector) -> Fraction:
        out = Fraction(0)
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                if sum(ma) == sum(mb):
                    out += ca * cb * self.pairing_monomials(ma, mb)
        return out

    def gram(self, level: int) -> list[list[Fraction]]:
        hit = self._gram_cache.get(level)
        if hit is not None:
            return hit
        monos = partitions(level)
        mat = [[self.pairing_monomials(a, b) for b in monos] for a in monos]
        self._gram_cache[level] = mat
        return mat

    def basis(self, level: int) -> GradedBasis:
        hit = self._basis_cache.get(level)
        if hit is not None:
            return hit
        monos = partitions(level)
        full = self.gram(level)
        kept: list[int] = []
        for idx in range(len(monos)):
            trial = kept + [idx]
            sub = [[full[i][j] for j in trial] for i in trial]
            if frac_det(sub):
                kept.append(idx)
        basis = GradedBasis(
            params=self.params,
            level=level,
            pivots=tuple(monos[i] for i in kept),
            gram=tuple(tuple(full[i][j] for j in kept) for i in kept),
        )
        self._basis_cache[level] = basis
        return basis


_ENGINES: dict[CentralParams, _Engine] = {}


def _engine(params: CentralParams) -> _Engine:
    eng = _ENGINES.get(params)
    if eng is None:
        eng = _Engine(params)
        _ENGINES[params] = eng
    return eng


def apply_mode(n: int, v: VermaVector) -> VermaVector:
    """L(n) applied to a vector, straightened back to PBW monomials."""
    return _engine(v.params).apply(n, v)


def pairing(a: VermaVector, b: VermaVector) -> Fraction:
    """Contravariant form <a, b> in the Verma module."""
    if a.params != b.params:
        raise ValueError("mixed module parameters")
    return _engine(a.params).pairing(a, b)


def shapovalov_gram(params: CentralParams, level: int) -> list[list[Fraction]]:
    """Gram matrix of the contravariant form on all PBW monomials of a level.

    Rows and columns follow partitions(level). Every entry is computed
    independently; symmetry is a verified property, not an input assumption.
    """
    return [row[:] for row in _engine(params).gram(level)]


def irreducible_basis(params: CentralParams, level: int) -> GradedBasis:
    """Greedy pivot basis of the level piece of the irreducible quotient."""
    return _engine(params).basis(level)


def reduce_vector(v: VermaVector, basis: GradedBasis) -> list[Fraction]:
    """Coordinates of the image of v in the irreducible quotient.

    Solves gram . c = (<pivot_i, v>)_i, which kills the radical, so any two
    Verma lifts of the same quotient element reduce identically.
    """
    if v.params != basis.params:
        raise ValueError("mixed module parameters")
    lvl = v.level()
    if lvl is not None and lvl != basis.level:
        raise ValueError(f"vector at level {lvl} against basis at level {basis.level}")
    if not basis.pivots:
        return []
    eng = _engine(v.params)
    rhs = []
    for piv in basis.pivots:
        acc = Fraction(0)
        for mono, c in v.terms.items():
            acc += c * eng.pairing_monomials(piv, mono)
        rhs.append(acc)
    coords = frac_solve([list(row) for row in basis.gram], rhs)
    if coords is None:
        raise ArithmeticError("pivot Gram matrix is singular; basis is corrupt")
    return coords


def graded_dimensions(params: CentralParams, max_level: int) -> list[int]:
    """Dimensions of the irreducible quotient at levels 0..max_level."""
    return [irreducible_basis(params, lvl).dimension for lvl in range(max_level + 1)]


def minimal_model_data(p: int, q: int) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Central charge and sorted distinct highest weights of a minimal model.

    Requires coprime integers p, q >= 2. The weight grid runs over
    0 < m < p, 0 < n < q and is returned deduplicated in increasing order.
    """
    from math import gcd

    if p < 2 or q < 2 or p == q or gcd(p, q) != 1:
        raise ValueError(f"need distinct coprime integers >= 2, got ({p}, {q})")
    c = 1 - Fraction(6 * (p - q) ** 2, p * q)
    weights = {
        Fraction((n * p - m * q) ** 2 - (p - q) ** 2, 4 * p * q)
        for m, n in itertools.product(range(1, p), range(1, q))
    }
    return c, tuple(sorted(weights))


def scaling_admissible(k, c) -> bool:
    """Whether k^2 * c is an even integer.

    This is the arithmetic obstruction for rescaled conformal vectors to span
    integral lattices: the self-pairing of k omega is k^2 c / 2.
    """
    x = _as_fraction(k) ** 2 * _as_fraction(c)
    return x.denominator == 1 and x.numerator % 2 == 0


ISING_ELL = Fraction(1, 2)
ISING_WEIGHTS = (Fraction(0), Fraction(1, 2), Fraction(1, 16))


def ising_params(h) -> CentralParams:
    """CentralParams at central charge 1/2 for one of the three Ising weights."""
    hf = _as_fraction(h)
    if hf not in ISING_WEIGHTS:
        allowed = ", ".join(str(w) for w in ISING_WEIGHTS)
        raise ValueError(f"weight {hf} is not one of {allowed}")
    return CentralParams(ISING_ELL, hf)
