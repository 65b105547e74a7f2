"""Exact q-series and characters of affine Lie algebra modules.

Everything here is exact rational arithmetic except the diagnostics of
:func:`growth_classify`, which fit floating-point models to log-coefficients.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, Inconclusive, IncompatibleOffsets, InvalidPower
from .liealg import (
    AlgebraKind,
    Weight,
    casimir,
    to_partition,
    weyl_dim,
)


@dataclass(frozen=True)
class QSeries:
    """q^lead_exp · Σ_{i=0}^{order} coeffs[i] q^i, truncated after q^{lead_exp+order}."""

    lead_exp: Fraction
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lead_exp", Fraction(self.lead_exp))
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("a q-series needs at least one coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value, order: int) -> "QSeries":
        return cls(Fraction(0), (Fraction(value),) + (Fraction(0),) * order)

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return QSeries(self.lead_exp, self.coeffs[: order + 1])

    def shift(self, exponent) -> "QSeries":
        """Multiply by q^exponent."""
        return QSeries(self.lead_exp + Fraction(exponent), self.coeffs)

    def coefficient(self, exponent) -> Fraction:
        """Coefficient of q^exponent; zero below the lead, error beyond the truncation."""
        offset = Fraction(exponent) - self.lead_exp
        if offset.denominator != 1:
            return Fraction(0)
        i = int(offset)
        if i < 0:
            return Fraction(0)
        if i > self.order:
            raise ValueError(f"q^{exponent} lies beyond the truncation order")
        return self.coeffs[i]

    def _aligned(self, other: "QSeries") -> tuple[Fraction, list[Fraction], list[Fraction]]:
        gap = other.lead_exp - self.lead_exp
        if gap.denominator != 1:
            raise IncompatibleOffsets(f"{self.lead_exp} and {other.lead_exp} differ by {gap}")
        gap = int(gap)
        lead = min(self.lead_exp, other.lead_exp)
        top = min(self.lead_exp + self.order, other.lead_exp + other.order)
        length = int(top - lead) + 1
        a = [Fraction(0)] * length
        b = [Fraction(0)] * length
        sa = int(self.lead_exp - lead)
        sb = int(other.lead_exp - lead)
        for i in range(length):
            if 0 <= i - sa <= self.order:
                a[i] = self.coeffs[i - sa]
            if 0 <= i - sb <= other.order:
                b[i] = other.coeffs[i - sb]
        return lead, a, b

    def __add__(self, other: "QSeries") -> "QSeries":
        lead, a, b = self._aligned(other)
        return QSeries(lead, tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + other.scale(-1)

    def scale(self, c) -> "QSeries":
        c = Fraction(c)
        return QSeries(self.lead_exp, tuple(c * x for x in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        order = min(self.order, other.order)
        return QSeries(self.lead_exp + other.lead_exp, _mul(self.coeffs, other.coeffs, order))

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        if self.coeffs[0] == 0:
            raise ZeroDivisionError("leading coefficient vanishes; series is not a unit")
        return QSeries(-self.lead_exp, _inverse(self.coeffs))

    def __truediv__(self, other: "QSeries") -> "QSeries":
        return self * other.inverse()

    def power(self, alpha) -> "QSeries":
        """Rational power; the leading coefficient must be 1 unless alpha is an integer."""
        alpha = Fraction(alpha)
        c0 = self.coeffs[0]
        if alpha.denominator != 1 and c0 != 1:
            raise InvalidPower("fractional powers need a unit leading coefficient 1")
        if c0 == 0:
            raise ZeroDivisionError("leading coefficient vanishes")
        normed = [c / c0 for c in self.coeffs]
        g = _power(normed, alpha)
        scale = c0 ** int(alpha) if alpha.denominator == 1 else Fraction(1)
        return QSeries(self.lead_exp * alpha, tuple(scale * x for x in g))

    def integer_coeffs(self) -> list[int]:
        out = []
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError(f"coefficient {c} is not an integer")
            out.append(int(c))
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "leadExpNum": self.lead_exp.numerator,
                "leadExpDen": self.lead_exp.denominator,
                "coeffs": [_fraction_json(c) for c in self.coeffs],
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        d = json.loads(text)
        coeffs = [
            Fraction(c) if isinstance(c, int) else Fraction(c["num"], c["den"]) for c in d["coeffs"]
        ]
        return cls(Fraction(d["leadExpNum"], d["leadExpDen"]), tuple(coeffs))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["grade", "numerator", "denominator"])
        for i, c in enumerate(self.coeffs):
            w.writerow([i, c.numerator, c.denominator])
        return buf.getvalue()


def _fraction_json(c: Fraction):
    if c.denominator == 1:
        return c.numerator
    return {"num": c.numerator, "den": c.denominator}


def _mul(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * (order + 1)
    nz_b = [(j, y) for j, y in enumerate(b[: order + 1]) if y]
    for i, x in enumerate(a[: order + 1]):
        if not x:
            continue
        for j, y in nz_b:
            if i + j > order:
                break
            out[i + j] += x * y
    return tuple(out)


def _inverse(a: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(a)
    inv0 = 1 / a[0]
    out = [inv0] + [Fraction(0)] * (n - 1)
    for i in range(1, n):
        s = sum((a[j] * out[i - j] for j in range(1, i + 1) if a[j]), Fraction(0))
        out[i] = -s * inv0
    return tuple(out)


def _power(f: Sequence[Fraction], alpha: Fraction) -> tuple[Fraction, ...]:
    # g = f^α with f_0 = 1:  n g_n = Σ_{k=1}^n ((α+1)k - n) f_k g_{n-k}
    n_max = len(f) - 1
    g = [Fraction(1)] + [Fraction(0)] * n_max
    nz = [(k, f[k]) for k in range(1, n_max + 1) if f[k]]
    for n in range(1, n_max + 1):
        s = Fraction(0)
        for k, fk in nz:
            if k > n:
                break
            s += ((alpha + 1) * k - n) * fk * g[n - k]
        g[n] = s / n
    return tuple(g)


# -- affine module data ------------------------------------------------------


@dataclass(frozen=True)
class AffineModuleLabel:
    algebra: AlgebraKind
    level: int
    weight: Weight | None = None

    def __post_init__(self) -> None:
        if self.level < 1:
            raise ValueError("level must be a positive integer")
        if self.weight is None:
            object.__setattr__(self, "weight", Weight((0,) * self.algebra.rank, self.algebra))
        if self.weight.algebra != self.algebra:
            raise ValueError("weight belongs to a different algebra")
        if self.algebra.family == "A":
            if not self.weight.is_dominant or self.weight.level() > self.level:
                raise ValueError(f"{self.weight.coords} is not dominant at level {self.level}")
        elif not self.weight.is_zero:
            raise ValueError(f"{self.algebra.name} supports only the vacuum label")


def label(algebra: AlgebraKind, level: int, *coords: int) -> AffineModuleLabel:
    w = Weight(tuple(coords), algebra) if coords else None
    return AffineModuleLabel(algebra, level, w)


def central_charge(lbl: AffineModuleLabel) -> Fraction:
    """Sugawara central charge k·dim g / (k + h∨)."""
    k = lbl.level
    return Fraction(k * lbl.algebra.dim, k + lbl.algebra.dual_coxeter)


def conformal_weight(lbl: AffineModuleLabel) -> Fraction:
    """Lowest L(0)-eigenvalue (λ, λ+2ρ) / (2(k + h∨))."""
    if lbl.weight.is_zero:
        return Fraction(0)
    return casimir(lbl.weight) / (2 * (lbl.level + lbl.algebra.dual_coxeter))


# -- eta and theta -----------------------------------------------------------


@lru_cache(maxsize=64)
def euler_product(order: int) -> tuple[Fraction, ...]:
    """∏_{n>=1} (1 - q^n) to the given order, from the pentagonal number theorem."""
    c = [Fraction(0)] * (order + 1)
    k = 0
    while True:
        hit = False
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2
            if e <= order:
                c[e] += -1 if kk % 2 else 1
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return tuple(c)


def eta_series(power, order: int) -> QSeries:
    """η(q)^power with η = q^{1/24} ∏(1 - q^n); power must lie in (1/2)ℤ."""
    power = Fraction(power)
    if (2 * power).denominator != 1:
        raise InvalidPower(f"eta power {power} is not a half-integer")
    if order < 0:
        raise ValueError("order must be non-negative")
    base = euler_product(order)
    return QSeries(power / 24, _power(base, power))


def partition_power_series(power, order: int) -> QSeries:
    """1/∏(1 - q^n)^power with no fractional prefactor."""
    return QSeries(Fraction(0), _power(euler_product(order), -Fraction(power)))


THETA_STATE_BUDGET = 10**7


def theta_series_a(n: int, coset: int, order: int, budget: int = THETA_STATE_BUDGET) -> QSeries:
    """Theta series of the coset A_{n-1} + Λ_coset of the weight lattice.

    Counts x ∈ ℤ^n with Σx = coset by the norm of the projection to the sum-zero
    hyperplane, Σx² - coset²/n. The minimal norm is 2h with h = coset(n-coset)/(2n);
    coefficient m counts vectors of norm 2(h + m).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    coset %= n
    h = Fraction(coset * (n - coset), 2 * n)
    max_sq = int(2 * (h + order) + Fraction(coset * coset, n))
    bound = math.isqrt(max_sq)
    sums = 2 * n * bound + 1
    states = n * sums * (max_sq + 1)
    if states > budget:
        raise BudgetExceeded(f"theta enumeration needs {states} states (budget {budget})")
    # dp[(partial sum, partial square norm)] = count
    dp: dict[tuple[int, int], int] = {(0, 0): 1}
    for _ in range(n):
        nxt: dict[tuple[int, int], int] = {}
        for (s, q), cnt in dp.items():
            for v in range(-bound, bound + 1):
                q2 = q + v * v
                if q2 > max_sq:
                    continue
                key = (s + v, q2)
                nxt[key] = nxt.get(key, 0) + cnt
        dp = nxt
    coeffs = [Fraction(0)] * (order + 1)
    for (s, q), cnt in dp.items():
        if s != coset:
            continue
        norm = Fraction(q) - Fraction(coset * coset, n)
        m = norm / 2 - h
        if m.denominator == 1 and 0 <= m <= order:
            coeffs[int(m)] += cnt
    return QSeries(h, tuple(coeffs))


def level1_character_sln(N: int, i: int, order: int) -> QSeries:
    """Character of L_{sl(N)}(1, Λ_i) as Θ_{A_{N-1}+Λ_i} / η^{N-1}."""
    if not 0 <= i < N:
        raise ValueError("fundamental index out of range")
    return theta_series_a(N, i, order) / eta_series(N - 1, order)


def sl2_affine_character(k: int, j: int, order: int) -> QSeries:
    """Character of L_{sl(2)}(k, j) from the Weyl-Kac formula, specialized at z = 1.

    Taking the z -> 1 limit of the theta quotient turns numerator and denominator
    into derivative theta series; the denominator becomes η³ by Jacobi's identity.
    """
    if not 0 <= j <= k:
        raise ValueError("need 0 <= j <= k")
    K = k + 2
    a = j + 1
    num = [Fraction(0)] * (order + 1)
    m = 0
    while True:
        hit = False
        for mm in ((0,) if m == 0 else (m, -m)):
            e = mm * a + mm * mm * K
            if 0 <= e <= order:
                num[e] += a + 2 * mm * K
                hit = True
            elif e < 0:
                raise AssertionError("theta exponent below lead")
        if not hit and m > 0:
            break
        m += 1
    lead = Fraction(a * a, 4 * K)
    numerator = QSeries(lead, tuple(num))
    return numerator / eta_series(3, order)


# -- affine Freudenthal ------------------------------------------------------


FREUDENTHAL_MAX_DEPTH = 6


class _Freudenthal:
    """Weight multiplicities of L_{sl(n)}(k, λ) at depth d below the top.

    Finite weights are integer n-vectors with fixed coordinate sum; dominant
    representatives are the non-increasing ones, which is all the finite Weyl
    group invariance needs.
    """

    def __init__(self, lbl: AffineModuleLabel):
        alg = lbl.algebra
        alg.require_a()
        self.n = alg.n
        self.k = lbl.level
        self.h = alg.dual_coxeter
        self.rank = alg.rank
        self.top = tuple(to_partition(lbl.weight))
        self.total = sum(self.top)
        self.rho = tuple(self.n - 1 - i for i in range(self.n))
        self.top_norm = self._norm(self.top)
        self.top_rho = self._norm(tuple(a + b for a, b in zip(self.top, self.rho)))
        self.roots = [(a, b) for a in range(self.n) for b in range(a + 1, self.n)]
        self.memo: dict[tuple[tuple[int, ...], int], int] = {}

    def _norm(self, x: Sequence[int]) -> Fraction:
        s = sum(x)
        return Fraction(sum(v * v for v in x)) - Fraction(s * s, self.n)

    def _in_cone(self, y: tuple[int, ...], d: int) -> bool:
        # Λ̂ - μ̂ = (λ - y) + dθ + dα_0 must have non-negative simple-root coefficients
        acc = 0
        for i in range(self.n - 1):
            acc += self.top[i] - y[i]
            if acc + d < 0:
                return False
        return True

    def _admissible(self, y: tuple[int, ...], d: int) -> bool:
        return self._norm(y) - 2 * self.k * d <= self.top_norm and self._in_cone(y, d)

    def mult(self, x: Sequence[int], d: int) -> int:
        if d < 0:
            return 0
        y = tuple(sorted(x, reverse=True))
        key = (y, d)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        value = self._compute(y, d)
        self.memo[key] = value
        return value

    def _compute(self, y: tuple[int, ...], d: int) -> int:
        if not self._admissible(y, d):
            return 0
        if d == 0 and y == self.top:
            return 1
        yr = tuple(a + b for a, b in zip(y, self.rho))
        lhs = self.top_rho - self._norm(yr) + 2 * (self.k + self.h) * d
        if lhs == 0:
            return 0
        rhs = 0
        k = self.k
        for a, b in self.roots:
            xa = y[a] - y[b]  # (y, α) for α = ε_a - ε_b
            for sign in (1, -1):
                for m in range(0 if sign == 1 else 1, d + 1):
                    j = 1
                    while d - j * m >= 0:
                        # (y + jσα, σα) + k m with (α, α) = 2
                        pair = sign * xa + 2 * j + k * m
                        x = list(y)
                        x[a] += sign * j
                        x[b] -= sign * j
                        yy = tuple(sorted(x, reverse=True))
                        dd = d - j * m
                        if self._norm(yy) - 2 * k * dd > self.top_norm and pair > 0:
                            break
                        mu = self.mult(x, dd)
                        if mu:
                            rhs += mu * pair
                        j += 1
        for m in range(1, d + 1):
            j = 1
            while d - j * m >= 0:
                rhs += self.rank * self.mult(y, d - j * m) * k * m
                j += 1
        val = Fraction(2 * rhs) / lhs
        if val.denominator != 1:
            raise ArithmeticError(f"non-integral multiplicity {val} at {y}, depth {d}")
        return int(val)

    def dominant_candidates(self, d: int) -> list[tuple[int, ...]]:
        """Non-increasing integer vectors with the right sum that pass the norm and cone tests."""
        n = self.n
        bound = self.top_norm + 2 * self.k * d
        mean = Fraction(self.total, n)
        out: list[tuple[int, ...]] = []
        lo = math.floor(mean - math.sqrt(float(bound)) - 1)
        hi = math.ceil(mean + math.sqrt(float(bound)) + 1)

        def rec(prefix: list[int], remaining_sum: int, sq: Fraction, cap: int):
            slots = n - len(prefix)
            if slots == 0:
                if remaining_sum == 0:
                    y = tuple(prefix)
                    if self._admissible(y, d):
                        out.append(y)
                return
            # least extra squared deviation: spread the remaining sum evenly
            avg = Fraction(remaining_sum, slots)
            if sq + slots * (avg - mean) ** 2 > bound:
                return
            for v in range(min(cap, hi), lo - 1, -1):
                if v * slots < remaining_sum:
                    break
                rec(prefix + [v], remaining_sum - v, sq + (v - mean) ** 2, v)

        rec([], self.total, Fraction(0), hi)
        return out

    @staticmethod
    def orbit_size(y: tuple[int, ...]) -> int:
        size = math.factorial(len(y))
        run = 1
        for i in range(1, len(y) + 1):
            if i < len(y) and y[i] == y[i - 1]:
                run += 1
            else:
                size //= math.factorial(run)
                run = 1
        return size

    def graded_dim(self, d: int) -> int:
        return sum(self.mult(y, d) * self.orbit_size(y) for y in self.dominant_candidates(d))


def affine_graded_dims(lbl: AffineModuleLabel, depth: int) -> list[int]:
    """dim of the L(0)-eigenspaces at h_λ + d for d = 0..depth, via affine Freudenthal."""
    if depth > FREUDENTHAL_MAX_DEPTH or (depth > 4 and lbl.algebra.rank > 27):
        raise BudgetExceeded(f"depth {depth} exceeds the Freudenthal budget")
    engine = _Freudenthal(lbl)
    dims = [engine.graded_dim(d) for d in range(depth + 1)]
    if dims[0] != weyl_dim(lbl.weight):
        raise ArithmeticError("grade-0 dimension disagrees with the Weyl dimension formula")
    return dims


def character_from_dims(lbl: AffineModuleLabel, dims: Sequence[int]) -> QSeries:
    lead = conformal_weight(lbl) - central_charge(lbl) / 24
    return QSeries(lead, tuple(Fraction(d) for d in dims))


# -- growth ------------------------------------------------------------------


@dataclass(frozen=True)
class WindowPolicy:
    window_fraction: float = 0.4
    poly_ratio: float = 1.5
    r2_min: float = 0.99
    convergence_tol: float = 0.10
    min_nonzero: int = 50
    square: bool = False


@dataclass
class GrowthVerdict:
    classification: str
    fitted_exponent: float
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "fittedExponent": self.fitted_exponent,
            "diagnostics": self.diagnostics,
        }


def growth_classify(
    series: QSeries | Sequence, policy: WindowPolicy | None = None, *, strict: bool = False
) -> GrowthVerdict:
    """Decide between polynomial and super-polynomial growth of |a_n|.

    The super-polynomial test runs first: over the trailing window, log|a_n| must
    fit A + B√n with B > 0 and R² above the policy threshold, and log|a_n|/√n must
    vary by less than the convergence tolerance. Otherwise the series is
    polynomial when max(log|a_n|/log n) <= poly_ratio · median over the window.
    With ``policy.square`` the coefficient sequence is squared as a series first.
    """
    policy = policy or WindowPolicy()
    s = series
    if policy.square:
        if not isinstance(s, QSeries):
            s = QSeries(Fraction(0), tuple(Fraction(c) for c in s))
        s = s * s
    coeffs = s.coeffs if isinstance(s, QSeries) else tuple(s)
    nonzero = [(n, abs(float(c))) for n, c in enumerate(coeffs) if n >= 1 and c != 0]
    if len(nonzero) < policy.min_nonzero:
        raise ValueError(f"need at least {policy.min_nonzero} nonzero coefficients, got {len(nonzero)}")
    total = len(coeffs) - 1
    start = total - int(round(policy.window_fraction * total))
    window = [(n, a) for n, a in nonzero if n >= max(start, 2)]
    ns = np.array([n for n, _ in window], dtype=float)
    logs = np.array([math.log(a) for _, a in window])

    sq = np.sqrt(ns)
    design = np.vstack([np.ones_like(sq), sq]).T
    coef, *_ = np.linalg.lstsq(design, logs, rcond=None)
    pred = design @ coef
    ss_res = float(np.sum((logs - pred) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    per_sqrt = logs / sq
    spread = float((per_sqrt.max() - per_sqrt.min()) / abs(per_sqrt.mean())) if per_sqrt.mean() else math.inf

    ratios = logs / np.log(ns)
    max_ratio = float(ratios.max())
    median_ratio = float(np.median(ratios))

    diagnostics = {
        "window": [int(ns[0]), int(ns[-1])],
        "sqrtFitSlope": float(coef[1]),
        "sqrtFitR2": r2,
        "logOverSqrtSpread": spread,
        "maxLogRatio": max_ratio,
        "medianLogRatio": median_ratio,
        "residuals": [float(r) for r in (logs - pred)],
        "squared": policy.square,
    }
    if coef[1] > 0 and r2 > policy.r2_min and spread < policy.convergence_tol:
        return GrowthVerdict("super-polynomial", float(coef[1]), diagnostics)
    if max_ratio <= policy.poly_ratio * median_ratio + 1e-12:
        return GrowthVerdict("polynomial", median_ratio, diagnostics)
    if strict:
        raise Inconclusive("neither growth regime detected")
    return GrowthVerdict("inconclusive", math.nan, diagnostics)


def sum_series(items: Iterable[QSeries]) -> QSeries:
    items = list(items)
    out = items[0]
    for s in items[1:]:
        out = out + s
    return out


def sl2_extension_character(k: int, labels: Sequence[int], order: int) -> QSeries:
    return sum_series(sl2_affine_character(k, j, order) for j in labels)
