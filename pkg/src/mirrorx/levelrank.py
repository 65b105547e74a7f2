"""Level-rank duality for sl(m)_n × sl(n)_m ⊂ sl(mn)_1.

Affine weights are handled as full label vectors (λ_0, λ_1, …, λ_{m-1}) where
λ_0 = n - Σ_{i>=1} λ_i; finite weights drop λ_0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .affinechar import AffineModuleLabel, conformal_weight
from .errors import BudgetExceeded, NoValidMu
from .liealg import (
    Weight,
    congruence_class,
    conjugate,
    dominant_weights_at_level,
    from_partition,
    sl,
    to_partition,
)

COSET_BUDGET = 64


def affine_labels(lam: Weight, level: int) -> tuple[int, ...]:
    rest = lam.coords
    lam0 = level - sum(rest)
    if lam0 < 0 or any(c < 0 for c in rest):
        raise ValueError(f"{rest} is not dominant at level {level}")
    return (lam0,) + tuple(rest)


def from_affine_labels(labels: tuple[int, ...], level: int) -> Weight:
    if sum(labels) != level:
        raise ValueError(f"labels {labels} do not sum to level {level}")
    return Weight(tuple(labels[1:]), sl(len(labels)))


def beta(lam: Weight, n: int) -> Weight:
    """The level-rank map from level-n weights of sl(m) to level-m weights of sl(n).

    With λ'_i = λ_i + 1 (λ'_m = λ'_0) and r_j = Σ_{i=j}^{m} λ'_i, the complement
    r̄_1 > … > r̄_n of {r_j} in {1, …, m+n} gives s_j = m+n + r̄_n - r̄_{n-j+1};
    s is the shifted partial-sum sequence of the image weight.
    """
    m = lam.algebra.n
    labels = affine_labels(lam, n)
    shifted = [a + 1 for a in labels]
    if sum(shifted) != m + n:
        raise ValueError("malformed weight")
    ext = shifted + [shifted[0]]  # index m wraps to 0
    r = [sum(ext[i] for i in range(j, m + 1)) for j in range(1, m + 1)]
    if r[0] != m + n or any(r[i] <= r[i + 1] for i in range(m - 1)) or r[-1] < 1:
        raise ValueError("shifted sums are not strictly decreasing")
    rbar = sorted(set(range(1, m + n + 1)) - set(r), reverse=True)
    assert len(rbar) == n
    s = [m + n + rbar[n - 1] - rbar[n - j] for j in range(1, n + 1)]
    # s_j = Σ_{i=j}^{n} λ̇'_i with λ̇'_n ≡ λ̇'_0
    primed = [s[j] - s[j + 1] for j in range(n - 1)]
    primed0 = s[n - 1]
    dot_labels = (primed0 - 1,) + tuple(p - 1 for p in primed)
    if any(a < 0 for a in dot_labels) or sum(dot_labels) != m:
        raise ArithmeticError(f"beta produced an invalid weight {dot_labels}")
    return from_affine_labels(dot_labels, m)


def cyclic_act(mu: int, lam: Weight, level: int) -> Weight:
    """Rotate affine labels so that Λ_i goes to Λ_{(i+μ) mod m}."""
    labels = affine_labels(lam, level)
    m = len(labels)
    rotated = [0] * m
    for i, a in enumerate(labels):
        rotated[(i + mu) % m] = a
    return from_affine_labels(tuple(rotated), level)


def transpose_weight(lam: Weight, n: int) -> Weight:
    """Transpose the Young diagram of λ (at most m-1 rows, at most n columns) into sl(n)."""
    cols = list(conjugate(to_partition(lam)))
    while len(cols) == n:
        cols = [c - 1 for c in cols if c > 1]
    return from_partition(cols, sl(n)) if cols else Weight((0,) * (n - 1), sl(n))


def transpose_partner(lam: Weight, n: int, lambda_tilde: int) -> Weight:
    """σ^{(Λ̃ - |λ|)/m} applied to the transposed diagram, |λ| the box count."""
    m = lam.algebra.n
    boxes = sum(to_partition(lam))
    if (boxes - lambda_tilde) % m:
        raise ValueError(f"{lam.coords} is not in the class of Λ_{lambda_tilde}")
    return cyclic_act(((lambda_tilde - boxes) // m) % n, transpose_weight(lam, n), m)


def coset_classes(m: int, n: int) -> dict[int, list[Weight]]:
    """Q_i: dominant level-n weights of sl(m) congruent to Λ_i modulo the root lattice."""
    if m * n > COSET_BUDGET:
        raise BudgetExceeded(f"m·n = {m * n} exceeds {COSET_BUDGET}")
    out: dict[int, list[Weight]] = {i: [] for i in range(m)}
    for w in dominant_weights_at_level(sl(m), n):
        out[congruence_class(w)].append(w)
    return out


@dataclass(frozen=True)
class BranchingPair:
    lam: Weight
    lam_dot: Weight
    mu: int
    h_lam: Fraction
    h_lam_dot: Fraction

    @property
    def grade_shift(self) -> Fraction:
        return self.h_lam + self.h_lam_dot


@dataclass(frozen=True)
class BranchingSpectrum:
    m: int
    n: int
    lambda_tilde: int
    pairs: tuple[BranchingPair, ...]

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "LambdaTilde": self.lambda_tilde,
            "pairs": [
                {
                    "lambda": list(p.lam.coords),
                    "lambdaDot": list(p.lam_dot.coords),
                    "mu": p.mu,
                    "hLambda": str(p.h_lam),
                    "hLambdaDot": str(p.h_lam_dot),
                }
                for p in self.pairs
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def branching_spectrum(m: int, n: int, lambda_tilde: int = 0) -> BranchingSpectrum:
    """Pairs (λ, λ̇ = μβ(λ)) with L_{sl(m)}(n, λ) ⊗ L_{sl(n)}(m, λ̇) inside L_{sl(mn)}(1, Λ̃).

    μ ∈ ℤ_n is picked by h_λ + h_λ̇ - h_Λ̃ ∈ ℤ. When an integer-weight simple
    current leaves several μ, the n-ality of λ̇ must match Λ̃ mod n and then λ̇
    must equal the rotated transpose of λ (:func:`transpose_partner`).
    """
    classes = coset_classes(m, n)
    lambda_tilde %= m * n
    h_tilde = Fraction(lambda_tilde * (m * n - lambda_tilde), 2 * m * n)
    big, small = sl(m), sl(n)
    pairs = []
    for lam in classes[lambda_tilde % m]:
        h_lam = conformal_weight(AffineModuleLabel(big, n, lam))
        b = beta(lam, n)
        candidates = []
        for mu in range(n):
            dot = cyclic_act(mu, b, m)
            h_dot = conformal_weight(AffineModuleLabel(small, m, dot))
            # μ and μ' giving the same weight (a σ-fixed point) count once
            if (h_lam + h_dot - h_tilde).denominator == 1 and all(c[1] != dot for c in candidates):
                candidates.append((mu, dot, h_dot))
        if len(candidates) > 1:
            candidates = [c for c in candidates if congruence_class(c[1]) == lambda_tilde % n]
        if len(candidates) > 1:
            partner = transpose_partner(lam, n, lambda_tilde)
            candidates = [c for c in candidates if c[1] == partner]
        if len(candidates) != 1:
            raise NoValidMu(f"λ = {lam.coords}: {len(candidates)} admissible twists")
        mu, dot, h_dot = candidates[0]
        pairs.append(BranchingPair(lam, dot, mu, h_lam, h_dot))
    pairs.sort(key=lambda p: p.lam.coords[::-1])
    return BranchingSpectrum(m, n, lambda_tilde, tuple(pairs))
