"""Finite-dimensional simple Lie algebra data.

Type A algebras are fully computational. B2 and G2 carry only the scalar data
(dimension, dual Coxeter number) needed for central charges and weight-one
counts.

Weights are stored as Dynkin labels against the fundamental weights.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import AlgebraMismatch, NonDominantWeight, UnsupportedFamily


@dataclass(frozen=True)
class AlgebraKind:
    family: str
    rank: int
    dim: int
    dual_coxeter: int

    def __post_init__(self) -> None:
        if self.family == "A":
            r = self.rank
            if r < 1 or self.dim != r * (r + 2) or self.dual_coxeter != r + 1:
                raise ValueError(f"inconsistent type A data: {self}")
        elif self.family == "B2":
            if (self.dim, self.dual_coxeter) != (10, 3):
                raise ValueError("B2 table must have dim 10 and h∨ 3")
        elif self.family == "G2":
            if (self.dim, self.dual_coxeter) != (14, 4):
                raise ValueError("G2 table must have dim 14 and h∨ 4")
        else:
            raise ValueError(f"unknown family {self.family!r}")

    @property
    def n(self) -> int:
        """The N of sl(N) for type A."""
        self.require_a()
        return self.rank + 1

    @property
    def name(self) -> str:
        if self.family == "A":
            return f"sl{self.rank + 1}"
        return self.family

    def require_a(self) -> None:
        if self.family != "A":
            raise UnsupportedFamily(f"{self.family} carries only scalar data")


def sl(n: int) -> AlgebraKind:
    """The algebra sl(n), of type A_{n-1}."""
    return AlgebraKind("A", n - 1, (n - 1) * (n + 1), n)


B2 = AlgebraKind("B2", 2, 10, 3)
G2 = AlgebraKind("G2", 2, 14, 4)


def parse_algebra(name: str) -> AlgebraKind:
    """Parse names like ``sl10``, ``sl(10)``, ``B2`` or ``G2``."""
    s = name.strip().replace("(", "").replace(")", "").lower()
    if s == "b2":
        return B2
    if s == "g2":
        return G2
    if s.startswith("sl") and s[2:].isdigit() and int(s[2:]) >= 2:
        return sl(int(s[2:]))
    raise ValueError(f"unknown algebra {name!r}")


@dataclass(frozen=True)
class Weight:
    coords: tuple[int, ...]
    algebra: AlgebraKind

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if len(self.coords) != self.algebra.rank:
            raise ValueError(
                f"{self.algebra.name} needs {self.algebra.rank} labels, got {len(self.coords)}"
            )

    @property
    def is_dominant(self) -> bool:
        return all(c >= 0 for c in self.coords)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def level(self) -> int:
        """<λ, θ> for type A: the sum of the labels."""
        self.algebra.require_a()
        return sum(self.coords)

    def __add__(self, other: "Weight") -> "Weight":
        _same(self, other)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)), self.algebra)

    def __str__(self) -> str:
        return format_weight(self)


def weight(algebra: AlgebraKind, *coords: int) -> Weight:
    return Weight(tuple(coords), algebra)


def fundamental(algebra: AlgebraKind, i: int) -> Weight:
    """Λ_i for 1 <= i <= rank; Λ_0 is the zero weight."""
    c = [0] * algebra.rank
    if i:
        c[i - 1] = 1
    return Weight(tuple(c), algebra)


def from_fundamentals(algebra: AlgebraKind, terms: dict[int, int]) -> Weight:
    """Build Σ c_i Λ_i from ``{i: c_i}``; index 0 is ignored."""
    c = [0] * algebra.rank
    for i, mult in terms.items():
        if i:
            c[i - 1] += mult
    return Weight(tuple(c), algebra)


def format_weight(w: Weight) -> str:
    if w.algebra.family == "A" and w.algebra.rank == 1:
        return str(w.coords[0])
    parts = []
    for i, c in enumerate(w.coords, start=1):
        if c == 1:
            parts.append(f"L{i}")
        elif c:
            parts.append(f"{c}L{i}")
    return "+".join(parts) if parts else "0"


def _same(a: Weight, b: Weight) -> None:
    if a.algebra != b.algebra:
        raise AlgebraMismatch(f"{a.algebra.name} vs {b.algebra.name}")


@lru_cache(maxsize=None)
def gram_matrix(algebra: AlgebraKind) -> tuple[tuple[Fraction, ...], ...]:
    """(Λ_i, Λ_j) = min(i, j) - ij/n, normalized so the long roots have norm 2."""
    algebra.require_a()
    n = algebra.n
    r = algebra.rank
    return tuple(
        tuple(Fraction(min(i, j)) - Fraction(i * j, n) for j in range(1, r + 1))
        for i in range(1, r + 1)
    )


def rho(algebra: AlgebraKind) -> Weight:
    algebra.require_a()
    return Weight((1,) * algebra.rank, algebra)


def inner(lam: Weight, mu: Weight) -> Fraction:
    _same(lam, mu)
    g = gram_matrix(lam.algebra)
    total = Fraction(0)
    for i, a in enumerate(lam.coords):
        if not a:
            continue
        row = g[i]
        for j, b in enumerate(mu.coords):
            if b:
                total += a * b * row[j]
    return total


def casimir(lam: Weight) -> Fraction:
    """(λ, λ + 2ρ)."""
    if not lam.is_dominant:
        raise NonDominantWeight(str(lam.coords))
    two_rho = Weight(tuple(2 for _ in lam.coords), lam.algebra)
    return inner(lam, lam + two_rho)


def weyl_dim(lam: Weight) -> int:
    """Weyl dimension formula for sl(n): product over i<j of (ℓ_i - ℓ_j)/(j - i)."""
    if not lam.is_dominant:
        raise NonDominantWeight(str(lam.coords))
    lam.algebra.require_a()
    shifted = _shifted_parts(lam)
    num = 1
    den = 1
    n = len(shifted)
    for i in range(n):
        for j in range(i + 1, n):
            num *= shifted[i] - shifted[j]
            den *= j - i
    return num // den


def _shifted_parts(lam: Weight) -> list[int]:
    p = to_partition(lam)
    n = lam.algebra.n
    return [p[i] + n - 1 - i for i in range(n)]


# Partitions: the sl(n) weight Σ a_i Λ_i maps to λ_j = Σ_{i>=j} a_i, padded to n parts.

def to_partition(lam: Weight) -> tuple[int, ...]:
    lam.algebra.require_a()
    parts = []
    acc = 0
    for a in reversed(lam.coords):
        acc += a
        parts.append(acc)
    parts.reverse()
    return tuple(parts) + (0,)


def from_partition(parts: Sequence[int], algebra: AlgebraKind) -> Weight:
    """Inverse of :func:`to_partition`; full columns of height n are discarded."""
    n = algebra.n
    p = list(parts) + [0] * (n - len(parts))
    if len(p) > n and any(p[n:]):
        raise ValueError(f"partition {tuple(parts)} has more than {n} rows")
    p = p[:n]
    return Weight(tuple(p[i] - p[i + 1] for i in range(n - 1)), algebra)


def conjugate(parts: Sequence[int]) -> tuple[int, ...]:
    parts = [p for p in parts if p > 0]
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p > i) for i in range(parts[0]))


def _lr_products(lam: tuple[int, ...], mu: tuple[int, ...]) -> Counter:
    """All c^ν_{λμ}, by filling the skew shape ν/λ with μ_1 ones, μ_2 twos, ...

    Each letter is placed as a horizontal strip; a filling is kept when the
    reverse reading word (right to left, top to bottom) is a lattice word.
    """
    lam = tuple(p for p in lam if p > 0)
    mu = tuple(p for p in mu if p > 0)
    if not mu:
        return Counter({lam: 1})
    result: Counter = Counter()
    rows = len(lam) + len(mu)

    def place(letter: int, shape: list[int], filling: list[list[int]]) -> None:
        if letter > len(mu):
            if _is_lattice(filling):
                result[tuple(p for p in shape if p > 0)] += 1
            return
        count = mu[letter - 1]
        for strip in _horizontal_strips(shape, count, rows, letter, filling):
            new_shape, new_filling = strip
            place(letter + 1, new_shape, new_filling)

    shape0 = list(lam) + [0] * (rows - len(lam))
    place(1, shape0, [[] for _ in range(rows)])
    return result


def _horizontal_strips(shape, count, rows, letter, filling):
    """Ways to add a horizontal strip of `count` boxes labelled `letter` to `shape`."""
    out = []

    def rec(r: int, remaining: int, cur: list[int]):
        if remaining == 0:
            new_filling = [row[:] for row in filling]
            for i in range(rows):
                new_filling[i].extend([letter] * (cur[i] - shape[i]))
            out.append((cur[:], new_filling))
            return
        if r >= rows:
            return
        cap = remaining if r == 0 else min(remaining, shape[r - 1] - shape[r])
        for add in range(cap, -1, -1):
            cur[r] = shape[r] + add
            rec(r + 1, remaining - add, cur)
        cur[r] = shape[r]

    rec(0, count, shape[:])
    return out


def _is_lattice(filling: list[list[int]]) -> bool:
    counts: Counter = Counter()
    for row in filling:
        for letter in reversed(row):
            counts[letter] += 1
            if letter > 1 and counts[letter] > counts[letter - 1]:
                return False
    return True


@lru_cache(maxsize=4096)
def lr_coefficients(lam: tuple[int, ...], mu: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """Littlewood-Richardson coefficients {ν: c^ν_{λμ}} for partitions λ, μ."""
    lam = tuple(p for p in lam if p > 0)
    mu = tuple(p for p in mu if p > 0)
    # The rule is invariant under conjugating all three shapes; use whichever
    # orientation has fewer rows to keep the enumeration small.
    if len(lam) + len(mu) > (lam[0] if lam else 0) + (mu[0] if mu else 0):
        conj = _lr_products(conjugate(lam), conjugate(mu))
        return {conjugate(nu): c for nu, c in conj.items()}
    return dict(_lr_products(lam, mu))


def tensor_decompose(lam: Weight, mu: Weight) -> Counter:
    """Multiset {ν: multiplicity} of irreducible summands of V_λ ⊗ V_μ."""
    _same(lam, mu)
    if not (lam.is_dominant and mu.is_dominant):
        raise NonDominantWeight(f"{lam.coords} ⊗ {mu.coords}")
    alg = lam.algebra
    alg.require_a()
    n = alg.n
    out: Counter = Counter()
    for nu, c in lr_coefficients(to_partition(lam), to_partition(mu)).items():
        if len(nu) <= n:
            out[from_partition(nu, alg)] += c
    return out


def dominant_weights_at_level(algebra: AlgebraKind, level: int) -> list[Weight]:
    """All dominant λ with <λ, θ> <= level, in lexicographic order of labels."""
    algebra.require_a()
    out: list[Weight] = []

    def rec(prefix: list[int], remaining: int):
        if len(prefix) == algebra.rank:
            out.append(Weight(tuple(prefix), algebra))
            return
        for a in range(remaining + 1):
            prefix.append(a)
            rec(prefix, remaining - a)
            prefix.pop()

    rec([], level)
    return out


def dual_weight(lam: Weight) -> Weight:
    """The contragredient λ* (labels reversed for type A)."""
    lam.algebra.require_a()
    return Weight(tuple(reversed(lam.coords)), lam.algebra)


def congruence_class(lam: Weight) -> int:
    """n-ality Σ i·a_i mod n: the class of λ in P/Q."""
    n = lam.algebra.n
    return sum(i * a for i, a in enumerate(lam.coords, start=1)) % n


def sl2_rep_matrices(j: int) -> tuple[list[list[Fraction]], list[list[Fraction]], list[list[Fraction]]]:
    """Exact (E, F, H) on the irrep with highest weight j, basis v_0..v_j with H v_i = (j-2i) v_i.

    F v_i = v_{i+1} and E v_i = i(j-i+1) v_{i-1}.
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    d = j + 1
    zero = Fraction(0)
    E = [[zero] * d for _ in range(d)]
    F = [[zero] * d for _ in range(d)]
    H = [[zero] * d for _ in range(d)]
    for i in range(d):
        H[i][i] = Fraction(j - 2 * i)
        if i + 1 < d:
            F[i + 1][i] = Fraction(1)
        if i >= 1:
            E[i - 1][i] = Fraction(i * (j - i + 1))
    return E, F, H


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(m)), Fraction(0)) for j in range(p)] for i in range(n)]


def commutator(a, b) -> list[list[Fraction]]:
    ab = matmul(a, b)
    ba = matmul(b, a)
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]


def leading_minors(m: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Exact leading principal minors by fraction-exact Gaussian elimination."""
    a = [list(map(Fraction, row)) for row in m]
    n = len(a)
    minors = []
    det = Fraction(1)
    for k in range(n):
        piv = a[k][k]
        if piv == 0:
            # leading minor is zero; remaining minors are not computed by this route
            minors.append(Fraction(0))
            minors.extend([Fraction(0)] * (n - k - 1))
            return minors
        det *= piv
        minors.append(det)
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return minors


def multiset_dim(decomp: Iterable[tuple[Weight, int]] | Counter) -> int:
    items = decomp.items() if isinstance(decomp, Counter) else decomp
    return sum(weyl_dim(w) * c for w, c in items)
