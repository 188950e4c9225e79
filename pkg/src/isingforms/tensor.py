"""Tensor powers of the c = 1/2 Virasoro irreducible modules.

A weight vector H = (h_1, ..., h_N) with every h_i in {0, 1/2, 1/16} labels
the module W_H, the tensor product of the irreducible factors. States are
indexed by keys: one (level, pivot index) pair per factor, packed into small
integers. For a subset T of {1..N} the signed diagonal operator is

    L_T(m) = sum over i not in T of L^(i)(m)  minus  sum over i in T,

acting on factor i only. These are the only mode actions the lattice and
correlation machinery ever needs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .codes import BinaryCode, Word
from .intmat import lcm_all
from .virasoro import (
    GradedBasis,
    VermaVector,
    apply_mode,
    irreducible_basis,
    ising_params,
    reduce_vector,
)

# A factor state is sid = 64 * level + pivot index. Per-level dimensions of
# the three Ising modules stay far below 64, which basis() asserts.
_SID_STRIDE = 64


def _sid(level: int, idx: int) -> int:
    return _SID_STRIDE * level + idx


def _sid_level(sid: int) -> int:
    return sid // _SID_STRIDE


@dataclass(frozen=True)
class HVector:
    """Tuple of factor highest weights, each 0, 1/2 or 1/16."""

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        allowed = {Fraction(0), Fraction(1, 2), Fraction(1, 16)}
        entries = tuple(Fraction(e) for e in self.entries)
        bad = [e for e in entries if e not in allowed]
        if bad:
            raise ValueError(f"factor weights must be 0, 1/2 or 1/16; got {bad}")
        if not entries:
            raise ValueError("empty weight vector")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def parse(cls, text: str) -> "HVector":
        parts = [p.strip() for p in text.split(",")]
        try:
            return cls(tuple(Fraction(p) for p in parts))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse weight vector {text!r}") from None

    @classmethod
    def vacuum(cls, n: int) -> "HVector":
        return cls((Fraction(0),) * n)

    @classmethod
    def sixteenth(cls, n: int) -> "HVector":
        return cls((Fraction(1, 16),) * n)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> Fraction:
        return sum(self.entries, Fraction(0))

    @property
    def support(self) -> Word:
        """Positions carrying weight 1/2, as a subset word."""
        return Word.from_set(
            {i for i, e in enumerate(self.entries, start=1) if e == Fraction(1, 2)},
            self.n,
        )

    @property
    def all_sixteenth(self) -> bool:
        return all(e == Fraction(1, 16) for e in self.entries)

    @property
    def has_sixteenth(self) -> bool:
        return any(e == Fraction(1, 16) for e in self.entries)

    def __str__(self) -> str:
        return ",".join(str(e) for e in self.entries)


class _Factor:
    """Mode action of one Ising factor on its graded pivot bases."""

    def __init__(self, h: Fraction):
        self.h = h
        self.params = ising_params(h)
        self._exp_cache: dict[tuple[int, int], tuple[tuple[int, Fraction], ...]] = {}

    def basis(self, level: int) -> GradedBasis:
        b = irreducible_basis(self.params, level)
        if b.dimension >= _SID_STRIDE:
            raise AssertionError(f"level {level} dimension overflows sid packing")
        return b

    def dim(self, level: int) -> int:
        return self.basis(level).dimension if level >= 0 else 0

    def expansion(self, sid: int, m: int) -> tuple[tuple[int, Fraction], ...]:
        """L(m) on pivot state sid, as (sid, coefficient) pairs at level - m."""
        key = (sid, m)
        hit = self._exp_cache.get(key)
        if hit is not None:
            return hit
        level = _sid_level(sid)
        target = level - m
        if target < 0 or self.dim(target) == 0:
            out: tuple[tuple[int, Fraction], ...] = ()
        else:
            pivot = self.basis(level).pivots[sid % _SID_STRIDE]
            image = apply_mode(m, VermaVector(self.params, {pivot: Fraction(1)}))
            coords = reduce_vector(image, self.basis(target))
            out = tuple(
                (_sid(target, j), c) for j, c in enumerate(coords) if c
            )
        self._exp_cache[key] = out
        return out


_FACTORS: dict[Fraction, _Factor] = {}


def _factor(h: Fraction) -> _Factor:
    f = _FACTORS.get(h)
    if f is None:
        f = _Factor(h)
        _FACTORS[h] = f
    return f


class TensorSpace:
    """Graded state enumeration for one weight vector."""

    def __init__(self, weights: HVector):
        self.weights = weights
        self.factors = [_factor(h) for h in weights.entries]
        self.n = weights.n
        self._key_cache: dict[int, list[tuple[int, ...]]] = {}
        self._index_cache: dict[int, dict[tuple[int, ...], int]] = {}

    def keys(self, level: int) -> list[tuple[int, ...]]:
        """State keys at the given level above the lowest weight.

        Factor levels are enumerated first factor fastest-varying last, with
        the leading factor taking the largest share first. This fixed order is
        the column order of every coordinate matrix built on this space.
        """
        hit = self._key_cache.get(level)
        if hit is not None:
            return hit
        out: list[tuple[int, ...]] = []

        def rec(pos: int, remaining: int, prefix: list[int]):
            if pos == self.n - 1:
                d = self.factors[pos].dim(remaining)
                for idx in range(d):
                    out.append(tuple(prefix + [_sid(remaining, idx)]))
                return
            for part in range(remaining, -1, -1):
                d = self.factors[pos].dim(part)
                if d == 0:
                    continue
                for idx in range(d):
                    prefix.append(_sid(part, idx))
                    rec(pos + 1, remaining - part, prefix)
                    prefix.pop()

        rec(0, level, [])
        self._key_cache[level] = out
        return out

    def index(self, level: int) -> dict[tuple[int, ...], int]:
        hit = self._index_cache.get(level)
        if hit is None:
            hit = {k: i for i, k in enumerate(self.keys(level))}
            self._index_cache[level] = hit
        return hit

    def dimension(self, level: int) -> int:
        return len(self.keys(level))

    def key_level(self, key: tuple[int, ...]) -> int:
        return sum(_sid_level(s) for s in key)


_SPACES: dict[HVector, TensorSpace] = {}


def space(weights: HVector) -> TensorSpace:
    sp = _SPACES.get(weights)
    if sp is None:
        sp = TensorSpace(weights)
        _SPACES[weights] = sp
    return sp


class TensorVector:
    """Rational combination of state keys of one tensor module."""

    __slots__ = ("weights", "terms")

    def __init__(self, weights: HVector, terms: dict[tuple[int, ...], Fraction] | None = None):
        self.weights = weights
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def lowest(cls, weights: HVector) -> "TensorVector":
        return cls(weights, {(_sid(0, 0),) * weights.n: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def level(self) -> int | None:
        sp = space(self.weights)
        levels = {sp.key_level(k) for k in self.terms}
        if not levels:
            return None
        if len(levels) > 1:
            raise ValueError("vector is not homogeneous")
        return levels.pop()

    def coordinates(self, level: int) -> list[Fraction]:
        sp = space(self.weights)
        idx = sp.index(level)
        out = [Fraction(0)] * len(idx)
        for k, c in self.terms.items():
            pos = idx.get(k)
            if pos is None:
                raise ValueError("vector has terms outside the requested level")
            out[pos] = c
        return out

    def __add__(self, other: "TensorVector") -> "TensorVector":
        if self.weights != other.weights:
            raise ValueError("mixed tensor modules")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return TensorVector(self.weights, terms)

    def __sub__(self, other: "TensorVector") -> "TensorVector":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "TensorVector":
        s = Fraction(scalar)
        return TensorVector(self.weights, {k: s * c for k, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, TensorVector)
                and self.weights == other.weights and self.terms == other.terms)

    def __repr__(self) -> str:
        return f"TensorVector({self.weights}, {len(self.terms)} terms)"


def apply_factor_mode(i: int, m: int, v: TensorVector) -> TensorVector:
    """L(m) on factor i (1-based), identity elsewhere."""
    sp = space(v.weights)
    if not 1 <= i <= sp.n:
        raise ValueError(f"factor {i} outside 1..{sp.n}")
    pos = i - 1
    factor = sp.factors[pos]
    terms: dict[tuple[int, ...], Fraction] = {}
    for key, c in v.terms.items():
        for sid2, c2 in factor.expansion(key[pos], m):
            nk = key[:pos] + (sid2,) + key[pos + 1:]
            terms[nk] = terms.get(nk, Fraction(0)) + c * c2
    return TensorVector(v.weights, terms)


def lt_action(T: Word, m: int, v: TensorVector) -> TensorVector:
    """The signed diagonal operator L_T(m) applied to v."""
    sp = space(v.weights)
    if T.n != sp.n:
        raise ValueError(f"subset on {T.n} points against a power of {sp.n} factors")
    terms: dict[tuple[int, ...], Fraction] = {}
    for pos in range(sp.n):
        sign = -1 if T.contains(pos + 1) else 1
        factor = sp.factors[pos]
        for key, c in v.terms.items():
            sc = sign * c
            for sid2, c2 in factor.expansion(key[pos], m):
                nk = key[:pos] + (sid2,) + key[pos + 1:]
                terms[nk] = terms.get(nk, Fraction(0)) + sc * c2
    return TensorVector(v.weights, terms)


def omega_component(power: int, i: int) -> TensorVector:
    """The conformal vector of factor i inside the vacuum tensor power."""
    return apply_factor_mode(i, -2, TensorVector.lowest(HVector.vacuum(power)))


def omega_total(power: int) -> TensorVector:
    """The diagonal conformal vector, the sum of all factor copies."""
    return lt_action(Word.empty(power), -2, TensorVector.lowest(HVector.vacuum(power)))


def omega_word(T: Word) -> TensorVector:
    """The signed conformal vector attached to a subset."""
    return lt_action(T, -2, TensorVector.lowest(HVector.vacuum(T.n)))


def lt0_eigenvalue(T: Word, weights: HVector) -> Fraction:
    """Eigenvalue of L_T(0) on the lowest weight vector of W_H.

    Closed forms exist when every factor weight lies in {0, 1/2}, where the
    value is |S|/2 - |S meet T| over the 1/2-support S, and when all factors
    are 1/16, where it is (N - 2|T|)/16. Mixed 1/16 input is rejected: no
    closed form is asserted for it, and generic lt_action covers those cases.
    """
    if T.n != weights.n:
        raise ValueError(f"subset on {T.n} points against {weights.n} factors")
    if weights.has_sixteenth:
        if not weights.all_sixteenth:
            raise ValueError("no closed eigenvalue form for mixed 1/16 weight vectors")
        return Fraction(weights.n - 2 * T.weight, 16)
    s = weights.support
    return Fraction(s.weight, 2) - s.intersection_weight(T)


@dataclass(frozen=True)
class CommutatorTerms:
    """Right hand side of the signed diagonal commutator.

    [L_S(m), L_T(mode)] = linear * L_word(m + mode) + central * identity,
    with word = S + T and central nonzero only when m + mode = 0. The central
    scalar is (N - 2|S+T|)/4 * binom(m+1, 3), N being the tensor power; the
    power is taken from the ground set size of the words, never from a mode.
    """

    linear: int
    word: Word
    central: Fraction


def commutator_symbolic(S: Word, T: Word, m: int, n_mode: int) -> CommutatorTerms:
    if S.n != T.n:
        raise ValueError("subsets on different ground sets")
    word = S + T
    power = S.n
    if m + n_mode == 0:
        central = Fraction(power - 2 * word.weight, 4) * Fraction((m + 1) * m * (m - 1), 6)
    else:
        central = Fraction(0)
    return CommutatorTerms(linear=m - n_mode, word=word, central=central)


def verify_commutator(S: Word, T: Word, m: int, n_mode: int,
                      weights: HVector, max_level: int) -> bool:
    """Check the commutator identity on every state key up to max_level.

    Direct route: both compositions evaluated in full through lt_action.
    """
    sp = space(weights)
    terms = commutator_symbolic(S, T, m, n_mode)
    for level in range(max_level + 1):
        for key in sp.keys(level):
            w = TensorVector(weights, {key: Fraction(1)})
            lhs = lt_action(S, m, lt_action(T, n_mode, w)) \
                - lt_action(T, n_mode, lt_action(S, m, w))
            rhs = terms.linear * lt_action(terms.word, m + n_mode, w) + terms.central * w
            if lhs != rhs:
                return False
    return True


@dataclass(frozen=True)
class SweepReport:
    ok: bool
    pairs: int
    instances: int
    failures: tuple[tuple[str, str, int, int, int], ...]


def verify_commutator_sweep(code: BinaryCode, weights: HVector,
                            mode_bound: int, max_level: int) -> SweepReport:
    """Commutator identity for every ordered pair of codewords and mode pair.

    Equivalent to calling verify_commutator over the whole grid, but arranged
    for speed: all coefficients are scaled by one global denominator D so the
    inner loops run on plain integers, and the N^2 pairwise factor commutators
    are computed once per (m, n, state) and then combined per codeword pair by
    expanding the signed sums bilinearly. Every cross-factor commutator is
    computed and compared numerically; nothing is assumed to cancel.
    """
    sp = space(weights)
    n_factors = sp.n
    if code.n != n_factors:
        raise ValueError(f"code length {code.n} against a power of {n_factors} factors")
    b = mode_bound

    # Collect every factor expansion the sweep can touch and clear denominators.
    needed: dict[tuple[int, int], dict[int, tuple[tuple[int, Fraction], ...]]] = {}
    source_sids: list[set[int]] = [set() for _ in range(n_factors)]
    for level in range(max_level + 1):
        for key in sp.keys(level):
            for pos, sid in enumerate(key):
                source_sids[pos].add(sid)
    denoms: set[int] = {24}
    frac_exp: dict[tuple[int, int, int], tuple[tuple[int, Fraction], ...]] = {}

    def load(pos: int, sid: int, m: int):
        k = (pos, sid, m)
        if k in frac_exp:
            return frac_exp[k]
        exp = sp.factors[pos].expansion(sid, m)
        frac_exp[k] = exp
        for _, c in exp:
            denoms.add(c.denominator)
        return exp

    second_sids: list[set[int]] = [set() for _ in range(n_factors)]
    for pos in range(n_factors):
        for sid in source_sids[pos]:
            for m in range(-2 * b, 2 * b + 1):
                exp = load(pos, sid, m)
                if abs(m) <= b:
                    for sid2, _ in exp:
                        second_sids[pos].add(sid2)
    for pos in range(n_factors):
        for sid in second_sids[pos]:
            for m in range(-b, b + 1):
                load(pos, sid, m)

    scale = lcm_all(denoms)
    iexp: dict[tuple[int, int, int], tuple[tuple[int, int], ...]] = {
        k: tuple((sid2, int(c * scale)) for sid2, c in exp)
        for k, exp in frac_exp.items()
    }

    words = code.words()
    signs = {
        w.bits: tuple(-1 if w.contains(i) else 1 for i in range(1, n_factors + 1))
        for w in words
    }
    failures: list[tuple[str, str, int, int, int]] = []
    instances = 0

    def apply_int(pos: int, m: int, vec: dict[tuple[int, ...], int]):
        out: dict[tuple[int, ...], int] = {}
        for key, c in vec.items():
            for sid2, c2 in iexp[(pos, key[pos], m)]:
                nk = key[:pos] + (sid2,) + key[pos + 1:]
                out[nk] = out.get(nk, 0) + c * c2
        return out

    for m in range(-b, b + 1):
        for n in range(-b, b + 1):
            lin = m - n
            for level in range(max_level + 1):
                for key in sp.keys(level):
                    unit = {key: 1}
                    first_n = [apply_int(j, n, unit) for j in range(n_factors)]
                    first_m = [apply_int(i, m, unit) for i in range(n_factors)]
                    first_sum = [apply_int(i, m + n, unit) for i in range(n_factors)]
                    comm = [[None] * n_factors for _ in range(n_factors)]
                    for i in range(n_factors):
                        for j in range(n_factors):
                            d = apply_int(i, m, first_n[j])
                            for k2, c2 in apply_int(j, n, first_m[i]).items():
                                d[k2] = d.get(k2, 0) - c2
                            comm[i][j] = {k2: c2 for k2, c2 in d.items() if c2}
                    central_int = 0
                    if m + n == 0:
                        binom = Fraction((m + 1) * m * (m - 1), 6)
                        # weight of S+T varies per pair; precompute the scalar base
                        central_base = binom * scale * scale
                    for S in words:
                        s_signs = signs[S.bits]
                        for T in words:
                            t_signs = signs[T.bits]
                            lhs: dict[tuple[int, ...], int] = {}
                            for i in range(n_factors):
                                si = s_signs[i]
                                row = comm[i]
                                for j in range(n_factors):
                                    cij = row[j]
                                    if not cij:
                                        continue
                                    f = si * t_signs[j]
                                    for k2, c2 in cij.items():
                                        lhs[k2] = lhs.get(k2, 0) + f * c2
                            st_bits = S.bits ^ T.bits
                            st_signs = signs[st_bits]
                            if lin:
                                f0 = lin * scale
                                for i in range(n_factors):
                                    f = f0 * st_signs[i]
                                    for k2, c2 in first_sum[i].items():
                                        lhs[k2] = lhs.get(k2, 0) - f * c2
                            if m + n == 0:
                                central_int = int(
                                    Fraction(n_factors - 2 * st_bits.bit_count(), 4)
                                    * central_base
                                )
                                if central_int:
                                    lhs[key] = lhs.get(key, 0) - central_int
                            instances += 1
                            if any(lhs.values()):
                                failures.append(
                                    (S.to_string(), T.to_string(), m, n, level)
                                )
    return SweepReport(
        ok=not failures,
        pairs=len(words) ** 2,
        instances=instances,
        failures=tuple(failures[:20]),
    )


def pairing(v: TensorVector, w: TensorVector) -> Fraction:
    """Factorwise invariant form: the product of per-factor Shapovalov values.

    Keys pair to zero unless every factor sits at the same level on both
    sides; L_T(m) is adjoint to L_T(-m) for this form because each factor
    inherits adjointness from its own module.
    """
    if v.weights != w.weights:
        raise ValueError("mixed tensor modules")
    sp = space(v.weights)
    total = Fraction(0)
    for k1, c1 in v.terms.items():
        for k2, c2 in w.terms.items():
            p = Fraction(1)
            for pos in range(sp.n):
                l1 = _sid_level(k1[pos])
                if l1 != _sid_level(k2[pos]):
                    p = Fraction(0)
                    break
                g = sp.factors[pos].basis(l1).gram
                p *= g[k1[pos] % _SID_STRIDE][k2[pos] % _SID_STRIDE]
                if not p:
                    break
            if p:
                total += c1 * c2 * p
    return total


def dimension_at_level(weights: HVector, level: int) -> int:
    """Dimension of one graded piece, by convolving factor dimension series."""
    if level < 0:
        return 0
    series = [1] + [0] * level
    for h in weights.entries:
        f = _factor(h)
        fdims = [f.dim(l) for l in range(level + 1)]
        series = [
            sum(series[j] * fdims[k - j] for j in range(k + 1))
            for k in range(level + 1)
        ]
    return series[level]


@dataclass(frozen=True)
class WeightOneReport:
    total: int
    two_half_count: int
    two_half_dimension: int
    vacuum_dimension: int
    sixteenth_copies: int
    sixteenth_dimension: int


def weight1_count_e8() -> WeightOneReport:
    """Dimension of the conformal weight 1 piece of the 16-factor sum.

    The module is the sum of W_H over all H in {0,1/2}^16 with integral total
    weight, plus 128 copies of the all-1/16 module. Weight one means factor
    level 1 - total(H), so only the vacuum (level 1) and the two-half vectors
    (level 0) can contribute; both are counted honestly from the graded bases.
    """
    n = 16
    vacuum_dim = dimension_at_level(HVector.vacuum(n), 1)
    two_half_count = 0
    two_half_dim = 0
    half = Fraction(1, 2)
    for pair in itertools.combinations(range(n), 2):
        entries = [Fraction(0)] * n
        entries[pair[0]] = half
        entries[pair[1]] = half
        d = dimension_at_level(HVector(tuple(entries)), 0)
        two_half_count += 1
        two_half_dim += d
    # supports of size 4 or more sit at total weight 2 or more: nothing at weight 1
    sixteenth_dim = dimension_at_level(HVector.sixteenth(n), 0)
    copies = 2 ** 7
    total = vacuum_dim + two_half_dim + copies * sixteenth_dim
    return WeightOneReport(
        total=total,
        two_half_count=two_half_count,
        two_half_dimension=two_half_dim,
        vacuum_dimension=vacuum_dim,
        sixteenth_copies=copies,
        sixteenth_dimension=sixteenth_dim,
    )
