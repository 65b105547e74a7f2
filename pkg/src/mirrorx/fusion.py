"""Fusion rules of sl(n) at positive integer level.

sl(2) uses the closed form; general sl(n) uses Kac-Walton: decompose the finite
tensor product, then fold each summand into the level-k alcove with the shifted
affine Weyl group, tracking signs.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .errors import BudgetExceeded
from .levelrank import BranchingSpectrum
from .liealg import (
    Weight,
    dominant_weights_at_level,
    dual_weight,
    format_weight,
    from_partition,
    sl,
    tensor_decompose,
    to_partition,
)

KAC_WALTON_BUDGET = 64  # rank · level


def sl2_fusion(k: int, a: int, b: int) -> list[int]:
    if not (0 <= a <= k and 0 <= b <= k):
        raise ValueError(f"labels must lie in 0..{k}")
    return list(range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2))


def fold(lam: Weight, k: int) -> tuple[int, Weight | None]:
    """Bring λ+ρ into the fundamental alcove at level k+n.

    Returns (sign, weight); sign 0 means λ+ρ sits on a wall and drops out.
    """
    n = lam.algebra.n
    rho = [n - 1 - i for i in range(n)]
    v = [p + r for p, r in zip(to_partition(lam), rho)]
    kk = k + n
    sign = 1
    for _ in range(10 * (n + k + 2) ** 2):
        # finite Weyl group: sort descending, counting transpositions
        order = sorted(range(n), key=lambda i: -v[i])
        perm_sign = _perm_sign(order)
        v = [v[i] for i in order]
        sign *= perm_sign
        if any(v[i] == v[i + 1] for i in range(n - 1)):
            return 0, None
        gap = v[0] - v[-1]
        if gap < kk:
            shift = v[-1]
            parts = [x - r - shift for x, r in zip(v, rho)]
            return sign, from_partition(parts, lam.algebra)
        if gap == kk:
            return 0, None
        # affine reflection s_0: v -> v - ((v, θ) - (k+n)) θ with θ = ε_1 - ε_n
        t = gap - kk
        v[0] -= t
        v[-1] += t
        sign = -sign
    raise RuntimeError("affine folding did not terminate")


def _perm_sign(order: Sequence[int]) -> int:
    seen = [False] * len(order)
    sign = 1
    for i in range(len(order)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def kac_walton(lam: Weight, mu: Weight, k: int) -> Counter:
    alg = lam.algebra
    alg.require_a()
    if alg.rank * k > KAC_WALTON_BUDGET:
        raise BudgetExceeded(f"rank·level = {alg.rank * k} exceeds {KAC_WALTON_BUDGET}")
    for w in (lam, mu):
        if not w.is_dominant or w.level() > k:
            raise ValueError(f"{w.coords} is not dominant at level {k}")
    out: Counter = Counter()
    for nu, c in tensor_decompose(lam, mu).items():
        s, w = fold(nu, k)
        if s:
            out[w] += s * c
    for w, c in out.items():
        if c < 0:
            raise ArithmeticError(f"negative fusion multiplicity at {w.coords}")
    return Counter({w: c for w, c in out.items() if c})


@dataclass
class FusionRing:
    n: int
    level: int
    basis: list[Weight]
    table: dict[tuple[int, int], dict[int, int]] = field(default_factory=dict)

    @classmethod
    def build(cls, n: int, level: int, basis: Sequence[Weight] | None = None) -> "FusionRing":
        alg = sl(n)
        basis = list(basis) if basis is not None else dominant_weights_at_level(alg, level)
        index = {w: i for i, w in enumerate(basis)}
        ring = cls(n, level, basis)
        for i, j in product(range(len(basis)), repeat=2):
            if j < i:
                ring.table[(i, j)] = ring.table[(j, i)]
                continue
            if n == 2:
                prod = Counter({Weight((c,), alg): 1 for c in sl2_fusion(level, basis[i].coords[0], basis[j].coords[0])})
            else:
                prod = kac_walton(basis[i], basis[j], level)
            row: dict[int, int] = {}
            for w, c in prod.items():
                # products leaving the basis are recorded with index -1
                row[index.get(w, -1)] = row.get(index.get(w, -1), 0) + c
            ring.table[(i, j)] = row
        return ring

    def N(self, a: int, b: int, c: int) -> int:
        return self.table[(a, b)].get(c, 0)

    def is_closed(self) -> bool:
        return all(-1 not in row for row in self.table.values())

    def check_commutative(self) -> bool:
        r = range(len(self.basis))
        return all(self.table[(a, b)] == self.table[(b, a)] for a in r for b in r)

    def unit_index(self) -> int:
        return next(i for i, w in enumerate(self.basis) if w.is_zero)

    def check_unit(self) -> bool:
        u = self.unit_index()
        return all(self.table[(u, b)] == {b: 1} for b in range(len(self.basis)))

    def check_associative(self) -> list[tuple[int, int, int]]:
        if not self.is_closed():
            raise ValueError("associativity needs a closed basis")
        r = range(len(self.basis))
        bad = []
        for a, b, c in product(r, repeat=3):
            left: Counter = Counter()
            for e, x in self.table[(a, b)].items():
                for d, y in self.table[(e, c)].items():
                    left[d] += x * y
            right: Counter = Counter()
            for e, x in self.table[(b, c)].items():
                for d, y in self.table[(a, e)].items():
                    right[d] += x * y
            if left != right:
                bad.append((a, b, c))
        return bad

    def check_duality(self) -> bool:
        """N^0_{a,b} = 1 exactly when b is the contragredient of a."""
        u = self.unit_index()
        for a, wa in enumerate(self.basis):
            for b, wb in enumerate(self.basis):
                expected = 1 if wb == dual_weight(wa) else 0
                if self.N(a, b, u) != expected:
                    return False
        return True

    def to_dict(self) -> dict:
        size = len(self.basis)
        return {
            "algebra": f"sl{self.n}",
            "level": self.level,
            "basis": [list(w.coords) for w in self.basis],
            "N": [[[self.N(a, b, c) for c in range(size)] for b in range(size)] for a in range(size)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def format_table(self) -> str:
        names = [format_weight(w) for w in self.basis]
        lines = []
        for a, b in product(range(len(self.basis)), repeat=2):
            if b < a:
                continue
            terms = []
            for c, mult in sorted(self.table[(a, b)].items()):
                name = names[c] if c >= 0 else "(outside basis)"
                terms.append(name if mult == 1 else f"{mult}*{name}")
            lines.append(f"{names[a]} x {names[b]} = {' + '.join(terms) or '0'}")
        return "\n".join(lines)


@dataclass
class FusionIsoReport:
    m: int
    n: int
    triples_checked: int
    mismatches: list[tuple[int, int, int]]
    closed_left: bool
    closed_right: bool
    left: FusionRing
    right: FusionRing

    @property
    def passed(self) -> bool:
        return not self.mismatches and self.closed_left and self.closed_right

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "triplesChecked": self.triples_checked,
            "mismatches": [list(t) for t in self.mismatches],
            "closedLeft": self.closed_left,
            "closedRight": self.closed_right,
            "pass": self.passed,
        }


def fusion_iso(spectrum: BranchingSpectrum) -> FusionIsoReport:
    """Compare fusion coefficients on both sides of a vacuum branching spectrum."""
    m, n = spectrum.m, spectrum.n
    lams = [p.lam for p in spectrum.pairs]
    dots = [p.lam_dot for p in spectrum.pairs]
    left = FusionRing.build(m, n, lams)
    right = FusionRing.build(n, m, dots)
    size = len(lams)
    bad = [
        (a, b, c)
        for a, b, c in product(range(size), repeat=3)
        if left.N(a, b, c) != right.N(a, b, c)
    ]
    return FusionIsoReport(m, n, size**3, bad, left.is_closed(), right.is_closed(), left, right)
