"""Integer lattices inside graded pieces of code tensor modules.

A graded piece carries the lattice spanned over Z by straightened products
L_{T_1}(-m_1)...L_{T_k}(-m_k) applied to the lowest weight vector, with
labels running over complement-reduced codewords and modes weakly decreasing.
Lattices are stored as one common denominator plus an integer matrix in row
Hermite normal form, so membership, rank, and equality are exact integer
questions. Graded duals live in the same ambient coordinates via the
factorwise invariant form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .codes import BinaryCode, Word, complement_reduce, goodform_conditions
from .intmat import RowSpanSolver, det_bareiss, frac_det, frac_inverse, hnf, hnf_solve, lcm_all
from .tensor import (
    _SID_STRIDE,
    _sid_level,
    HVector,
    TensorVector,
    lt0_eigenvalue,
    lt_action,
    omega_word,
    space,
)
from .virasoro import partitions


def admissible_weights(code: BinaryCode, weights: HVector) -> tuple[bool, str]:
    """Whether the module lattice machinery applies to this (code, H) pair.

    For weights in {0, 1/2} the signed zero-mode eigenvalues are integers
    exactly when the 1/2-support has even size. For the all-1/16 vector the
    requirement is (N - 2|T|)/16 in Z for every codeword T. Mixed 1/16
    entries are rejected outright.
    """
    if weights.n != code.n:
        return False, f"weight vector length {weights.n} against code length {code.n}"
    if weights.has_sixteenth:
        if not weights.all_sixteenth:
            return False, "mixed 1/16 entries are not supported"
        for t in code.words():
            if (weights.n - 2 * t.weight) % 16:
                return False, (
                    f"zero-mode eigenvalue not integral for codeword {t.to_string()}"
                )
        return True, ""
    if weights.support.weight % 2:
        return False, "odd number of weight-1/2 factors"
    return True, ""


def _check_inputs(code: BinaryCode, weights: HVector):
    report = goodform_conditions(code)
    if not report.passed:
        raise ValueError("code fails the form conditions")
    ok, reason = admissible_weights(code, weights)
    if not ok:
        raise ValueError(f"inadmissible weight vector: {reason}")


@dataclass(frozen=True)
class SpanningMonomial:
    """Ordered product of lowering operators, leftmost applied last.

    ops is a sequence of (mode, label) pairs with modes weakly decreasing;
    labels are complement-reduced codewords, the opposite sign of each label
    being implied by L_{T^c}(-m) = -L_T(-m).
    """

    ops: tuple[tuple[int, Word], ...]

    @property
    def level(self) -> int:
        return sum(m for m, _ in self.ops)

    def label(self) -> str:
        if not self.ops:
            return "v"
        return "".join(f"L[{t.to_string()}](-{m})" for m, t in self.ops) + "v"


def spanning_monomials(code: BinaryCode, weights: HVector, level: int) -> list[SpanningMonomial]:
    """All straightened spanning products at one level, in a fixed order.

    Modes stay above 1 for the vacuum power (level-1 factor states vanish
    there) and above 0 otherwise. Runs of equal modes take weakly increasing
    label choices so each unordered product appears once.
    """
    _check_inputs(code, weights)
    if level < 0:
        raise ValueError("negative level")
    min_mode = 2 if weights.total == 0 and not weights.has_sixteenth else 1
    reps = complement_reduce(code)
    out: list[SpanningMonomial] = []
    for shape in partitions(level):
        if shape and shape[-1] < min_mode:
            continue
        runs = [(m, len(list(g))) for m, g in itertools.groupby(shape)]
        pools = [
            list(itertools.combinations_with_replacement(range(len(reps)), r))
            for _, r in runs
        ]
        for choice in itertools.product(*pools):
            ops: list[tuple[int, Word]] = []
            for (m, _), labels in zip(runs, choice):
                ops.extend((m, reps[i]) for i in labels)
            out.append(SpanningMonomial(tuple(ops)))
    return out


def evaluate_monomial(mon: SpanningMonomial, weights: HVector) -> TensorVector:
    v = TensorVector.lowest(weights)
    for m, t in reversed(mon.ops):
        v = lt_action(t, -m, v)
    return v


@dataclass(frozen=True)
class LevelLattice:
    """One graded piece: rows/denominator span the lattice in key coordinates."""

    weights: HVector
    code: BinaryCode | None
    level: int
    denominator: int
    basis: tuple[tuple[int, ...], ...]
    ambient_dim: int

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def full_rank(self) -> bool:
        return self.rank == self.ambient_dim

    def basis_vectors(self) -> list[TensorVector]:
        keys = space(self.weights).keys(self.level)
        out = []
        for row in self.basis:
            terms = {
                keys[j]: Fraction(c, self.denominator)
                for j, c in enumerate(row) if c
            }
            out.append(TensorVector(self.weights, terms))
        return out


def _from_rational_rows(weights: HVector, code: BinaryCode | None, level: int,
                        rows: list[list[Fraction]]) -> LevelLattice:
    ambient = space(weights).dimension(level)
    den = lcm_all([c.denominator for row in rows for c in row] or [1])
    int_rows = [[int(c * den) for c in row] for row in rows]
    reduced = hnf(int_rows)
    # drop a denominator no surviving entry needs
    g = 0
    for row in reduced:
        for c in row:
            g = g if not c else _gcd(g, abs(c))
    shrink = _gcd(g, den) if g else den
    if shrink > 1:
        den //= shrink
        reduced = [[c // shrink for c in row] for row in reduced]
    return LevelLattice(
        weights=weights,
        code=code,
        level=level,
        denominator=den,
        basis=tuple(tuple(row) for row in reduced),
        ambient_dim=ambient,
    )


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def lattice_at_level(code: BinaryCode, weights: HVector, level: int) -> LevelLattice:
    """Evaluate the spanning products and reduce to a Hermite basis."""
    mons = spanning_monomials(code, weights, level)
    rows = [evaluate_monomial(mon, weights).coordinates(level) for mon in mons]
    return _from_rational_rows(weights, code, level, rows)


@dataclass(frozen=True)
class GradedLattice:
    weights: HVector
    code: BinaryCode | None
    per_level: dict[int, LevelLattice]


def graded_lattice(code: BinaryCode, weights: HVector, max_level: int) -> GradedLattice:
    per = {l: lattice_at_level(code, weights, l) for l in range(max_level + 1)}
    return GradedLattice(weights, code, per)


def contains(entry: LevelLattice, v: TensorVector) -> bool:
    if v.is_zero():
        return True
    if v.weights != entry.weights:
        raise ValueError("vector from a different tensor module")
    if v.level() != entry.level:
        raise ValueError(f"vector at level {v.level()}, lattice at level {entry.level}")
    if not entry.basis:
        return False
    scaled = []
    for c in v.coordinates(entry.level):
        s = c * entry.denominator
        if s.denominator != 1:
            return False
        scaled.append(int(s))
    return hnf_solve(list(map(list, entry.basis)), scaled) is not None


def lattices_equal(a: LevelLattice, b: LevelLattice) -> bool:
    """Exact equality of the spanned lattices, denominators normalized away."""
    if a.weights != b.weights or a.level != b.level:
        raise ValueError("lattices in different ambient spaces")
    den = _lcm(a.denominator, b.denominator)
    fa, fb = den // a.denominator, den // b.denominator
    sa = tuple(tuple(fa * c for c in row) for row in a.basis)
    sb = tuple(tuple(fb * c for c in row) for row in b.basis)
    return sa == sb


def _lcm(a: int, b: int) -> int:
    return a * b // _gcd(a, b)


@dataclass(frozen=True)
class CompareReport:
    a_in_b: bool
    b_in_a: bool
    equal: bool
    index: int | None


def compare(a: LevelLattice, b: LevelLattice) -> CompareReport:
    """Containments by membership solves; index of the smaller in the larger."""
    if a.weights != b.weights or a.level != b.level:
        raise ValueError("lattices in different ambient spaces")
    den = _lcm(a.denominator, b.denominator)
    sa = [[den // a.denominator * c for c in row] for row in a.basis]
    sb = [[den // b.denominator * c for c in row] for row in b.basis]
    a_in_b = all(hnf_solve(sb, row) is not None for row in sa)
    b_in_a = all(hnf_solve(sa, row) is not None for row in sb)
    index = None
    small, big = (sa, sb) if a_in_b else (sb, sa) if b_in_a else (None, None)
    if small is not None and len(small) == len(big):
        m = [hnf_solve(big, row) for row in small]
        if all(r is not None for r in m):
            index = abs(det_bareiss(m))
    return CompareReport(
        a_in_b=a_in_b,
        b_in_a=b_in_a,
        equal=a_in_b and b_in_a,
        index=index,
    )


_KEY_GRAM_CACHE: dict[tuple[HVector, int], list[list[Fraction]]] = {}


def _key_gram(weights: HVector, level: int) -> list[list[Fraction]]:
    hit = _KEY_GRAM_CACHE.get((weights, level))
    if hit is not None:
        return hit
    sp = space(weights)
    keys = sp.keys(level)
    out = []
    for k1 in keys:
        row = []
        for k2 in keys:
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
            row.append(p)
        out.append(row)
    _KEY_GRAM_CACHE[(weights, level)] = out
    return out


def gram_matrix(weights: HVector, level: int, rows) -> list[list[Fraction]]:
    """Pairwise invariant-form values of the given homogeneous rows.

    Rows may be TensorVectors or coordinate sequences in key order.
    """
    coords = []
    for r in rows:
        if isinstance(r, TensorVector):
            coords.append(r.coordinates(level))
        else:
            coords.append([Fraction(c) for c in r])
    p = _key_gram(weights, level)
    # image[j] = P * coords[j]; Gram entry (i, j) = coords[i] . image[j]
    image = [
        [sum((p[a][b] * c for b, c in enumerate(col) if c), Fraction(0))
         for a in range(len(p))]
        for col in coords
    ]
    return [
        [sum((c * img[a] for a, c in enumerate(row) if c), Fraction(0))
         for img in image]
        for row in coords
    ]


@dataclass(frozen=True)
class DualReport:
    lattice: LevelLattice
    gram: tuple[tuple[Fraction, ...], ...]
    dual: LevelLattice
    index: Fraction
    contains_lattice: bool
    self_dual: bool


def graded_dual(entry: LevelLattice, gram: list[list[Fraction]] | None = None) -> DualReport:
    """Dual basis through the invariant form, with the index |det Gram|."""
    if not entry.full_rank:
        raise ValueError("graded dual needs a full-rank lattice at this level")
    basis_rows = [
        [Fraction(c, entry.denominator) for c in row] for row in entry.basis
    ]
    if gram is None:
        gram = gram_matrix(entry.weights, entry.level, basis_rows)
    inv = frac_inverse([list(r) for r in gram])
    if inv is None:
        raise ValueError("degenerate Gram matrix")
    dual_rows = [
        [
            sum((inv[i][k] * basis_rows[k][j] for k in range(len(basis_rows))), Fraction(0))
            for j in range(entry.ambient_dim)
        ]
        for i in range(len(basis_rows))
    ]
    dual = _from_rational_rows(entry.weights, entry.code, entry.level, dual_rows)
    integral = all(g.denominator == 1 for row in gram for g in row)
    index = abs(frac_det([list(r) for r in gram]))
    return DualReport(
        lattice=entry,
        gram=tuple(tuple(r) for r in gram),
        dual=dual,
        index=index,
        contains_lattice=integral,
        self_dual=integral and index == 1,
    )


@dataclass(frozen=True)
class GeneratedFormReport:
    per_level: dict[int, LevelLattice]
    rounds: int
    stabilized: bool
    message: str


def _omega_coefficients(u: TensorVector) -> list[tuple[Fraction, Word]]:
    """Write a level-2 vacuum-power vector as a sum of signed conformal vectors."""
    weights = u.weights
    if any(e != 0 for e in weights.entries):
        raise ValueError("generators must live in a vacuum tensor power")
    if u.is_zero() or u.level() != 2:
        raise ValueError("generators must be homogeneous of level 2")
    n = weights.n
    if n > 12:
        raise ValueError("vacuum power too large for generator decomposition")
    reps = [Word(2 * b, n) for b in range(2 ** (n - 1))]  # subsets avoiding position 1
    rows = [omega_word(t).coordinates(2) for t in reps]
    solver = RowSpanSolver(rows)
    coeffs = solver.solve(u.coordinates(2))
    if coeffs is None:
        raise ValueError("generator is not a combination of signed conformal vectors")
    return [(a, t) for a, t in zip(coeffs, reps) if a]


def saturate_generated_form(generators: list[TensorVector], max_level: int,
                            mode_budget: int, max_rounds: int = 8) -> GeneratedFormReport:
    """Close the Z-span of generator-mode products from the vacuum.

    Each round applies every generator mode with |m| <= mode_budget to the
    current per-level bases, so products grow one operator per round. The
    loop stops once two consecutive rounds leave every Hermite basis
    unchanged; running out of rounds is reported, not raised. Closure at the
    stopping point is a checked fixed point of single applications only,
    hence the report wording "stabilized (heuristic)".
    """
    if max_level < 0 or mode_budget < 1 or max_rounds < 1:
        raise ValueError("budgets must be positive")
    if not generators:
        weights = HVector.vacuum(1)
    else:
        weights = generators[0].weights
        if any(g.weights != weights for g in generators):
            raise ValueError("generators from different tensor powers")
    ops = [_omega_coefficients(g) for g in generators]
    state: dict[int, LevelLattice] = {}

    def merge(level: int, vectors: list[TensorVector]) -> bool:
        rows = [v.coordinates(level) for v in vectors if not v.is_zero()]
        if not rows:
            return False
        prev = state.get(level)
        if prev is not None:
            rows = [
                [Fraction(c, prev.denominator) for c in row] for row in prev.basis
            ] + rows
        new = _from_rational_rows(weights, None, level, rows)
        if prev is not None and lattices_equal(prev, new):
            return False
        state[level] = new
        return True

    merge(0, [TensorVector.lowest(weights)])
    rounds = 0
    stable_streak = 0
    while rounds < max_rounds and stable_streak < 2:
        rounds += 1
        snapshot = {l: e.basis_vectors() for l, e in state.items()}
        pending: dict[int, list[TensorVector]] = {}
        for level, vectors in snapshot.items():
            for v in vectors:
                for coeffs in ops:
                    for m in range(-mode_budget, mode_budget + 1):
                        target = level - m
                        if not 0 <= target <= max_level:
                            continue
                        image = TensorVector(weights)
                        for a, t in coeffs:
                            image = image + a * lt_action(t, m, v)
                        if not image.is_zero():
                            pending.setdefault(target, []).append(image)
        changed = False
        for level in sorted(pending):
            if merge(level, pending[level]):
                changed = True
        stable_streak = 0 if changed else stable_streak + 1
    stabilized = stable_streak >= 2
    return GeneratedFormReport(
        per_level=state,
        rounds=rounds,
        stabilized=stabilized,
        message="stabilized (heuristic)" if stabilized else "round budget exhausted",
    )


def eigenvalue_table(code: BinaryCode, weights: HVector) -> list[tuple[Word, Fraction]]:
    """Zero-mode eigenvalue of every codeword on the lowest weight vector."""
    return [(t, lt0_eigenvalue(t, weights)) for t in code.words()]
