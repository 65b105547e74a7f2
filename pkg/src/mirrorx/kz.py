"""Reduced KZ equation for sl(2)_k four-point blocks.

A block is a function of u3 ⊗ u2 on the weight subspace W of V_{λ3} ⊗ V_{λ2}
with total weight λ4 - λ1, with u1 the highest-weight vector of V_{λ1} and u4'
the lowest-weight vector of the dual of V_{λ4}. With κ = k + 2 the equation
reads

    dΨ/dξ = (M0/κ) Ψ/ξ + (M1/κ) Ψ/(ξ - 1)

with M0, M1 exact rational matrices acting on functions on W. Blocks are
normalized through fixed Clebsch-Gordan maps C^c_{a,b}: V_a ⊗ V_b → V_c, which
pins the intertwiner normalization consistently across configurations.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Sequence

import numpy as np
import sympy as sp
from scipy.integrate import solve_ivp

from .errors import IllConditioned, MirrorxError
from .fusion import sl2_fusion

RTOL = 1e-12
ATOL = 1e-14
SERIES_TERMS = 90
EVAL_POINT = 0.5


class EmptySubspace(MirrorxError):
    pass


class ResonanceUnresolved(MirrorxError):
    """A physical channel needs a logarithmic Frobenius solution."""


class NoNonzeroSolution(MirrorxError):
    pass


class NoCrossingSolution(MirrorxError):
    pass


class NonConvergence(MirrorxError):
    pass


def casimir2(j: int) -> Fraction:
    return Fraction(j * (j + 2), 2)


def conformal_weight2(k: int, j: int) -> Fraction:
    return Fraction(j * (j + 2), 4 * (k + 2))


def classical_channels(a: int, b: int) -> list[int]:
    return list(range(abs(a - b), a + b + 1, 2))


# -- sl(2) modules as dict vectors ------------------------------------------


def _e(j: int, i: int) -> tuple[int, Fraction] | None:
    """E v_i = i(j - i + 1) v_{i-1}."""
    return (i - 1, Fraction(i * (j - i + 1))) if i > 0 else None


def _f(j: int, i: int) -> tuple[int, Fraction] | None:
    return (i + 1, Fraction(1)) if i < j else None


def _h(j: int, i: int) -> Fraction:
    return Fraction(j - 2 * i)


def _apply_first(op, j: int, vec: dict) -> dict:
    out: dict = {}
    for (x, y), c in vec.items():
        r = op(j, x)
        if r is not None:
            out[(r[0], y)] = out.get((r[0], y), 0) + c * r[1]
    return {k: v for k, v in out.items() if v}


def _apply_second(op, j: int, vec: dict) -> dict:
    out: dict = {}
    for (x, y), c in vec.items():
        r = op(j, y)
        if r is not None:
            out[(x, r[0])] = out.get((x, r[0]), 0) + c * r[1]
    return {k: v for k, v in out.items() if v}


def _add(*vecs: dict) -> dict:
    out: dict = {}
    for v in vecs:
        for k, c in v.items():
            out[k] = out.get(k, 0) + c
    return {k: v for k, v in out.items() if v}


def _scale(c, vec: dict) -> dict:
    return {k: c * v for k, v in vec.items() if c * v}


def _hw_vector(a: int, b: int, c: int) -> dict:
    """Highest-weight vector of weight c in V_a ⊗ V_b, coefficient 1 on v_0 ⊗ v_s."""
    s0 = (a + b - c) // 2
    alpha = {0: Fraction(1)}
    for ia in range(1, min(a, s0) + 1):
        ib_prev = s0 - ia + 1
        alpha[ia] = -alpha[ia - 1] * ib_prev * (b - ib_prev + 1) / (ia * (a - ia + 1))
    return {(ia, s0 - ia): v for ia, v in alpha.items() if 0 <= s0 - ia <= b}


@lru_cache(maxsize=None)
def clebsch_gordan(c: int, a: int, b: int) -> dict[tuple[int, int], tuple[int, Fraction]]:
    """C^c_{a,b}: v_ia ⊗ v_ib ↦ coefficient · v_k (exact), keyed by (ia, ib).

    C sends f^k w_c to v_k = f^k v_0 and annihilates the other isotypic
    components, w_c being :func:`_hw_vector`.
    """
    if c not in classical_channels(a, b):
        raise ValueError(f"V_{c} does not occur in V_{a} ⊗ V_{b}")
    chans = classical_channels(a, b)
    desc: dict[int, list[dict]] = {}
    for cc in chans:
        w = _hw_vector(a, b, cc)
        seq = [w]
        for _ in range(cc):
            w = _add(_apply_first(_f, a, w), _apply_second(_f, b, w))
            seq.append(w)
        desc[cc] = seq
    out = {}
    for s in range(a + b + 1):
        pairs = [(ia, s - ia) for ia in range(a + 1) if 0 <= s - ia <= b]
        if not pairs:
            continue
        cols, labels = [], []
        for cc in chans:
            kk = s - (a + b - cc) // 2
            if 0 <= kk <= cc:
                cols.append([desc[cc][kk].get(p, Fraction(0)) for p in pairs])
                labels.append((cc, kk))
        if c not in [lab[0] for lab in labels]:
            continue
        mat = sp.Matrix(len(pairs), len(cols), lambda i, j: sp.Rational(cols[j][i].numerator, cols[j][i].denominator))
        inv = mat.inv()
        row = [lab[0] for lab in labels].index(c)
        kk = labels[row][1]
        for col, p in enumerate(pairs):
            v = inv[row, col]
            if v != 0:
                out[p] = (kk, Fraction(int(v.p), int(v.q)))
    return out


def cg_apply(c: int, a: int, b: int, vec: dict) -> dict[int, Fraction]:
    table = clebsch_gordan(c, a, b)
    out: dict[int, Fraction] = {}
    for p, coef in vec.items():
        if p in table:
            k, v = table[p]
            out[k] = out.get(k, 0) + coef * v
    return {k: v for k, v in out.items() if v}


def omega_on_channel(a: int, b: int, c: int) -> Fraction:
    """Scalar by which Ω = e⊗f + f⊗e + h⊗h/2 acts on V_c ⊂ V_a ⊗ V_b."""
    return (casimir2(c) - casimir2(a) - casimir2(b)) / 2


def omega_vector(a: int, b: int, vec: dict) -> dict:
    return _add(
        _apply_first(_e, a, _apply_second(_f, b, vec)),
        _apply_first(_f, a, _apply_second(_e, b, vec)),
        _scale(Fraction(1, 2), _apply_first(lambda j, i: (i, _h(j, i)), a, _apply_second(lambda j, i: (i, _h(j, i)), b, vec))),
    )


# -- the system --------------------------------------------------------------


@dataclass(frozen=True)
class FourPointConfig:
    level: int
    labels: tuple[int, int, int, int]  # λ1, λ2, λ3, λ4

    def __post_init__(self):
        if len(self.labels) != 4:
            raise ValueError("four labels are required")
        if any(not 0 <= x <= self.level for x in self.labels):
            raise ValueError(f"labels must lie in 0..{self.level}")
        if sum(self.labels) % 2:
            raise EmptySubspace("odd total weight")

    @property
    def kappa(self) -> int:
        return self.level + 2

    def swapped(self) -> "FourPointConfig":
        l1, l2, l3, l4 = self.labels
        return FourPointConfig(self.level, (l1, l3, l2, l4))

    def h(self, j: int) -> Fraction:
        return conformal_weight2(self.level, j)

    @property
    def delta_sum(self) -> Fraction:
        l1, l2, l3, l4 = self.labels
        return self.h(l4) - self.h(l3) - self.h(l2) - self.h(l1)


@dataclass(frozen=True)
class KZSystem:
    config: FourPointConfig
    basis: tuple[tuple[int, int], ...]  # (i3, i2)
    M0: tuple[tuple[Fraction, ...], ...]
    M1: tuple[tuple[Fraction, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def A0(self) -> list[list[Fraction]]:
        return [[x / self.config.kappa for x in row] for row in self.M0]

    @property
    def A1(self) -> list[list[Fraction]]:
        return [[x / self.config.kappa for x in row] for row in self.M1]

    def sym(self, which: int) -> sp.Matrix:
        m = self.M0 if which == 0 else self.M1
        return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in row] for row in m])

    def numeric(self) -> tuple[np.ndarray, np.ndarray]:
        k = self.config.kappa
        return (
            np.array([[float(x) / k for x in row] for row in self.M0], dtype=complex),
            np.array([[float(x) / k for x in row] for row in self.M1], dtype=complex),
        )

    def rhs(self, xi: complex, y: np.ndarray) -> np.ndarray:
        A0, A1 = self._numeric
        return A0 @ y / xi + A1 @ y / (xi - 1)

    @property
    def _numeric(self):
        cache = self.__dict__.get("_num_cache")
        if cache is None:
            cache = self.numeric()
            object.__setattr__(self, "_num_cache", cache)
        return cache


def build_system(config: FourPointConfig) -> KZSystem:
    l1, l2, l3, l4 = config.labels
    basis = tuple(
        (i3, i2)
        for i3 in range(l3 + 1)
        for i2 in range(l2 + 1)
        if (l3 - 2 * i3) + (l2 - 2 * i2) + l1 == l4
    )
    if not basis:
        raise EmptySubspace(f"no vectors of weight {l4 - l1} in V_{l3} ⊗ V_{l2}")
    index = {b: i for i, b in enumerate(basis)}
    d = len(basis)
    shift = (casimir2(l4) - casimir2(l3) - casimir2(l2) - casimir2(l1)) / 2
    M0 = [[Fraction(0)] * d for _ in range(d)]
    M1 = [[Fraction(0)] * d for _ in range(d)]
    hop = lambda j, i: (i, _h(j, i))
    for col, b in enumerate(basis):
        vec = {b: Fraction(1)}
        # R b = -(f⊗e) b - (1⊗fe) b + (λ1/2)(1⊗h) b, the Ω12 action after moving f off u1
        r = _add(
            _scale(-1, _apply_first(_f, l3, _apply_second(_e, l2, vec))),
            _scale(-1, _apply_second(_f, l2, _apply_second(_e, l2, vec))),
            _scale(Fraction(l1, 2), _apply_second(hop, l2, vec)),
        )
        o = omega_vector(l3, l2, vec)
        # functions transform by the transpose: (M F)(b) = F(R b)
        for key, c in r.items():
            M0[col][index[key]] += c
        for key, c in o.items():
            M1[col][index[key]] += c
    for i in range(d):
        M0[i][i] -= shift
    return KZSystem(config, basis, tuple(map(tuple, M0)), tuple(map(tuple, M1)))


# -- channels and Frobenius solutions ---------------------------------------


@dataclass
class Channel:
    label: int
    point: int
    exponent: Fraction
    classical: bool
    physical: bool
    leading: tuple[Fraction, ...]


def _frac(x) -> Fraction:
    num, den = sp.fraction(sp.nsimplify(x))
    return Fraction(int(num), int(den))


def _to_sym_vec(v: Sequence[Fraction]) -> sp.Matrix:
    return sp.Matrix([sp.Rational(x.numerator, x.denominator) for x in v])


def leading_vector(system: KZSystem, label: int, point: int) -> tuple[Fraction, ...]:
    """CG vector of a classical channel: u3 ⊗ u2 ↦ ⟨u4', C(u3 ⊗ C(u2 ⊗ u1))⟩ at ξ = 0,
    or ⟨u4', C(C(u3 ⊗ u2) ⊗ u1)⟩ at ξ = 1."""
    l1, l2, l3, l4 = system.config.labels
    out = []
    for i3, i2 in system.basis:
        if point == 0:
            inner = cg_apply(label, l2, l1, {(i2, 0): Fraction(1)})
            outer = cg_apply(l4, l3, label, {(i3, k): v for k, v in inner.items()})
        else:
            inner = cg_apply(label, l3, l2, {(i3, i2): Fraction(1)})
            outer = cg_apply(l4, label, l1, {(k, 0): v for k, v in inner.items()})
        out.append(outer.get(0, Fraction(0)))
    return tuple(out)


def channels(system: KZSystem, point: int) -> list[Channel]:
    """Eigen-channels of the residue matrix at ξ = point ∈ {0, 1}.

    Each eigenvalue is matched to the label μ with exponent h_μ + h3 - h4 at 0
    (h_ν - h3 - h2 at 1); classical channels carry their CG leading vector,
    the remaining eigenvectors come from an exact nullspace.
    """
    cfg = system.config
    l1, l2, l3, l4 = cfg.labels
    k = cfg.level
    M = system.sym(point)
    if point == 0:
        cands = classical_channels(l2, l1)
        expo = lambda mu: cfg.h(mu) + cfg.h(l3) - cfg.h(l4)
        is_classical = lambda mu: l4 in classical_channels(l3, mu)
        is_physical = lambda mu: mu <= k and mu in sl2_fusion(k, l2, l1) and l4 in sl2_fusion(k, l3, mu)
    else:
        cands = classical_channels(l3, l2)
        expo = lambda nu: cfg.h(nu) - cfg.h(l3) - cfg.h(l2)
        is_classical = lambda nu: l4 in classical_channels(nu, l1)
        is_physical = lambda nu: nu <= k and nu in sl2_fusion(k, l3, l2) and l4 in sl2_fusion(k, nu, l1)
    out = []
    for ev, mult in M.eigenvals().items():
        e = _frac(ev) / cfg.kappa
        labels = [mu for mu in cands if expo(mu) == e and is_classical(mu)]
        if len(labels) > 1 or (labels and mult != 1):
            raise ResonanceUnresolved(f"exponent {e} at ξ={point} is not a simple channel eigenvalue")
        if labels:
            mu = labels[0]
            lead = leading_vector(system, mu, point)
            lv = _to_sym_vec(lead)
            if any(M * lv - ev * lv) or not any(lead):
                raise ArithmeticError(f"CG vector of channel {mu} is not an eigenvector at ξ={point}")
            out.append(Channel(mu, point, e, True, is_physical(mu), lead))
            continue
        # non-classical eigenvalues: not invariant-theoretic channels, label -1
        # Jordan blocks may occur here; only the eigenvectors start Frobenius series
        for vec in (M - ev * sp.eye(M.rows)).nullspace():
            pivot = next(x for x in vec if x != 0)
            out.append(Channel(-1, point, e, False, False, tuple(_frac(x / pivot) for x in vec)))
    out.sort(key=lambda c: c.exponent)
    return out


@dataclass
class FrobeniusSolution:
    channel: Channel
    coeffs: np.ndarray  # (terms, d)
    logarithmic: bool = False

    def value(self, x: complex) -> np.ndarray:
        """Value at local coordinate x (ξ at 0, 1 - ξ at 1), principal branch of x^e."""
        powers = x ** np.arange(self.coeffs.shape[0])
        series = powers @ self.coeffs
        return series * cmath.exp(float(self.channel.exponent) * cmath.log(x))


def frobenius_solution(system: KZSystem, channel: Channel, terms: int = SERIES_TERMS) -> FrobeniusSolution:
    """Series x^e Σ c_n x^n with (κe + nκ - M_p) c_n = -M_q Σ_{m<n} c_m.

    At a resonance (κe + nκ an eigenvalue of M_p) the particular solution with
    zero component along the resonant eigenvector is taken; if the system is
    inconsistent the channel is flagged logarithmic.
    """
    kappa = system.config.kappa
    Mp = system.sym(channel.point)
    Mq = system.sym(1 - channel.point)
    d = system.dimension
    lam = sp.Rational(channel.exponent.numerator, channel.exponent.denominator) * kappa
    eigs = Mp.eigenvals()
    resonant = {n for n in range(1, terms) if any(lam + n * kappa == ev for ev in eigs)}
    exact_until = max(resonant, default=0)
    c = [_to_sym_vec(channel.leading)]
    S = c[0]
    logarithmic = False
    for n in range(1, exact_until + 1):
        rhs = -Mq * S
        N = (lam + n * kappa) * sp.eye(d) - Mp
        if n in resonant:
            ev = lam + n * kappa
            right = sp.Matrix.hstack(*(Mp - ev * sp.eye(d)).nullspace())
            left = sp.Matrix.hstack(*(Mp.T - ev * sp.eye(d)).nullspace())
            if any(left.T * rhs):
                logarithmic = True
                break
            sol, params = N.gauss_jordan_solve(rhs)
            sol = sol.subs({p: 0 for p in params})
            gram = left.T * right
            if gram.det() != 0:
                sol = sol - right * gram.inv() * (left.T * sol)
        else:
            sol = N.LUsolve(rhs)
        c.append(sol)
        S = S + sol
    coeffs = np.zeros((terms, d), dtype=complex)
    if logarithmic:
        return FrobeniusSolution(channel, coeffs, True)
    for n, v in enumerate(c):
        coeffs[n] = [complex(float(x)) for x in v]
    Mp_n = np.array(Mp.tolist(), dtype=float)
    Mq_n = np.array(Mq.tolist(), dtype=float)
    Sn = coeffs[: len(c)].sum(axis=0)
    lam_f = float(lam)
    for n in range(len(c), terms):
        N = (lam_f + n * kappa) * np.eye(d) - Mp_n
        coeffs[n] = np.linalg.solve(N, -Mq_n @ Sn)
        Sn = Sn + coeffs[n]
    return FrobeniusSolution(channel, coeffs, False)


@dataclass
class PhysicalBasis:
    """Physical blocks near ξ = 0, as values at ξ = EVAL_POINT, labelled by channel."""

    system: KZSystem
    labels: list[int]
    values: np.ndarray  # (n_phys, d)
    exponents: list[Fraction]
    residual: float
    all_solutions_0: list[FrobeniusSolution] = field(default_factory=list)
    all_solutions_1: list[FrobeniusSolution] = field(default_factory=list)


def channel_basis(system: KZSystem, point: int, terms: int = SERIES_TERMS) -> list[FrobeniusSolution]:
    return [frobenius_solution(system, ch, terms) for ch in channels(system, point)]


def _span_residual(target: np.ndarray, basis: np.ndarray) -> tuple[np.ndarray, float]:
    coef, *_ = np.linalg.lstsq(basis.T, target, rcond=None)
    res = np.linalg.norm(basis.T @ coef - target) / max(np.linalg.norm(target), 1e-300)
    return coef, float(res)


def physical_basis(system: KZSystem, terms: int = SERIES_TERMS) -> PhysicalBasis:
    """Double admissibility: blocks spanned by physical channels at both ξ = 0 and ξ = 1.

    Physical channels free of integer-offset partners are taken directly from
    either point; together they span the physical subspace P. A physical
    channel at ξ = 0 whose solution is ambiguous by non-physical partners
    with larger exponent is corrected by the unique combination lying in P.
    """
    sols0 = channel_basis(system, 0, terms)
    sols1 = channel_basis(system, 1, terms)
    if not any(s.channel.physical for s in sols0 + sols1):
        raise EmptySubspace("no physical channels")
    x0 = EVAL_POINT
    x1 = 1 - EVAL_POINT

    def dirty(sol: FrobeniusSolution, pool: list[FrobeniusSolution]) -> list[FrobeniusSolution]:
        e = sol.channel.exponent
        return [
            s for s in pool
            if not s.channel.physical and (s.channel.exponent - e).denominator == 1 and s.channel.exponent > e
        ]

    for s in sols0 + sols1:
        if s.channel.physical and s.logarithmic:
            raise ResonanceUnresolved(f"physical channel {s.channel.label} at ξ={s.channel.point} is logarithmic")
    clean = [s.value(x0) for s in sols0 if s.channel.physical and not dirty(s, sols0)]
    clean += [s.value(x1) for s in sols1 if s.channel.physical and not dirty(s, sols1)]
    n_phys = sum(1 for s in sols0 if s.channel.physical)
    n_phys1 = sum(1 for s in sols1 if s.channel.physical)
    if n_phys != n_phys1:
        raise MirrorxError(f"{n_phys} physical channels at 0 but {n_phys1} at 1")
    if n_phys == 0:
        raise EmptySubspace("no physical channels")
    P = np.array(clean)
    u, sv, vh = np.linalg.svd(P, full_matrices=False)
    rank = int(np.sum(sv > sv[0] * 1e-9))
    if rank != n_phys:
        raise MirrorxError(f"physical span has rank {rank}, expected {n_phys}")
    Pb = vh[:rank]
    labels, values, exps = [], [], []
    worst = 0.0
    for s in sols0:
        if not s.channel.physical:
            continue
        v = s.value(x0)
        # logarithmic partners cannot enter: physical blocks have diagonalizable local monodromy
        partners = [p for p in dirty(s, sols0) if not p.logarithmic]
        if partners:
            # v + Σ a_j partner_j ∈ span(P)
            Q = np.array([p.value(x0) for p in partners])
            A = np.vstack([Q, -Pb]).T
            coef, *_ = np.linalg.lstsq(A, -v, rcond=None)
            v = v + coef[: len(partners)] @ Q
        _, r = _span_residual(v, Pb)
        worst = max(worst, r)
        labels.append(s.channel.label)
        values.append(v)
        exps.append(s.channel.exponent)
    return PhysicalBasis(system, labels, np.array(values), exps, worst, sols0, sols1)


# -- continuation ------------------------------------------------------------

Path = list[tuple[Callable[[float], complex], Callable[[float], complex]]]


def _segment(a: complex, b: complex):
    return (lambda t: a + (b - a) * t, lambda t: b - a)


def _arc(center: complex, radius: float, th0: float, th1: float):
    return (
        lambda t: center + radius * cmath.exp(1j * (th0 + (th1 - th0) * t)),
        lambda t: 1j * radius * (th1 - th0) * cmath.exp(1j * (th0 + (th1 - th0) * t)),
    )


def exchange_path(kind: str = "arcs") -> Path:
    """Upper-half-plane paths from ξ = 1/2 to ξ = 2, staying >= 0.25 from 0 and 1."""
    if kind == "arcs":
        return [_arc(1, 0.5, math.pi, 0.0), _segment(1.5, 2.0)]
    if kind == "polyline":
        return [_segment(0.5, 0.5 + 0.5j), _segment(0.5 + 0.5j, 1.5 + 0.6j), _segment(1.5 + 0.6j, 2.0)]
    raise ValueError(kind)


def loop_path(point: int) -> Path:
    """Counterclockwise loop based at ξ = 1/2 around ξ = point."""
    if point == 0:
        return [_arc(0, 0.5, 0.0, 2 * math.pi)]
    return [_arc(1, 0.5, math.pi, 3 * math.pi)]


def min_distance(path: Path, samples: int = 400) -> float:
    best = math.inf
    for z, _ in path:
        for t in np.linspace(0, 1, samples):
            p = z(t)
            best = min(best, abs(p), abs(p - 1))
    return best


def transport(system: KZSystem, path: Path, rtol: float = RTOL, atol: float = ATOL) -> np.ndarray:
    """Fundamental matrix U with Ψ(end) = U Ψ(start) along the path."""
    if min_distance(path) < 0.25:
        raise MirrorxError("path too close to a singular point")
    d = system.dimension
    A0, A1 = system._numeric
    U = np.eye(d, dtype=complex)
    for z, dz in path:

        def f(t, y, z=z, dz=dz):
            xi = z(t)
            Y = y.reshape(d, d)
            return ((A0 / xi + A1 / (xi - 1)) @ Y * dz(t)).ravel()

        sol = solve_ivp(f, (0.0, 1.0), U.ravel(), method="DOP853", rtol=rtol, atol=atol)
        if not sol.success:
            raise NonConvergence(sol.message)
        U = sol.y[:, -1].reshape(d, d)
    return U


# -- braiding ----------------------------------------------------------------


@dataclass
class BraidingMatrix:
    config: FourPointConfig
    channels: list[int]
    exchange_channels: list[int]
    B: np.ndarray
    fit_residual: float
    normalization: str = "Clebsch-Gordan leading coefficients"

    def to_dict(self) -> dict:
        return {
            "config": {"level": self.config.level, "labels": list(self.config.labels)},
            "channels": self.channels,
            "exchangeChannels": self.exchange_channels,
            "B": [[[float(z.real), float(z.imag)] for z in row] for row in self.B],
            "fitResidual": self.fit_residual,
            "normalization": self.normalization,
        }


def _swap_permutation(system: KZSystem, swapped: KZSystem) -> list[int]:
    index = {b: i for i, b in enumerate(swapped.basis)}
    return [index[(i2, i3)] for i3, i2 in system.basis]


def exchange_values(system: KZSystem, xi: complex, phys_swapped: PhysicalBasis | None = None) -> tuple[list[int], np.ndarray]:
    """H_γ(ξ) = ξ^{-ΔΣ} Φ_γ(1/ξ) transported into the coordinates of W, for real ξ > 1."""
    swapped = build_system(system.config.swapped())
    pb = phys_swapped or physical_basis(swapped)
    perm = _swap_permutation(system, swapped)
    zeta = 1 / xi
    vals = []
    for lab, v0 in zip(pb.labels, pb.values):
        # values are stored at ζ = EVAL_POINT; move them along the real axis if needed
        v = v0 if abs(zeta - EVAL_POINT) < 1e-15 else transport(swapped, [_segment(EVAL_POINT, zeta)]) @ v0
        factor = cmath.exp(-float(system.config.delta_sum) * cmath.log(xi))
        vals.append(factor * v[perm])
    return pb.labels, np.array(vals)


def braiding(system: KZSystem, phys: PhysicalBasis | None = None, path: str = "arcs") -> BraidingMatrix:
    """B with Ψ_μ (continued through the upper half plane) = Σ_γ B_{μγ} H_γ."""
    phys = phys or physical_basis(system)
    U = transport(system, exchange_path(path))
    end = 2.0
    left = phys.values @ U.T  # rows: transported Ψ_μ(2)
    labels, H = exchange_values(system, end)
    if len(labels) != len(phys.labels):
        raise MirrorxError("channel counts differ between the two orderings")
    B, *_ = np.linalg.lstsq(H.T, left.T, rcond=None)
    B = B.T
    res = np.linalg.norm(B @ H - left) / np.linalg.norm(left)
    return BraidingMatrix(system.config, phys.labels, labels, B, float(res))


def braiding_for(level: int, labels: Sequence[int], path: str = "arcs") -> BraidingMatrix:
    return braiding(build_system(FourPointConfig(level, tuple(labels))), path=path)


# -- crossing symmetry -------------------------------------------------------


@dataclass
class CrossingResult:
    D: np.ndarray
    residual: float

    @property
    def passed(self) -> bool:
        return self.residual < 1e-6


def crossing_check(bm: BraidingMatrix) -> CrossingResult:
    """Diagonal D with D_a B_ab = D_b B_ba (all labels equal), D_a = T^k_{j,a} T^a_{i,l}."""
    l1, l2, l3, l4 = bm.config.labels
    B = bm.B
    n = B.shape[0]
    if n == 1:
        return CrossingResult(np.ones(1, dtype=complex), 0.0)
    if not (l2 == l3 and l1 == l4):
        raise ValueError("crossing check implemented for the symmetric configuration i = j, k = l")
    rows = []
    for a in range(n):
        for b in range(a + 1, n):
            r = np.zeros(n, dtype=complex)
            r[a] = B[a, b]
            r[b] = -B[b, a]
            rows.append(r)
    M = np.array(rows)
    _, sv, vh = np.linalg.svd(M)
    D = vh[-1].conj()
    D = D / D[np.argmax(abs(D))]
    if np.min(abs(D)) < 1e-8:
        raise NoCrossingSolution("a diagonal constant vanishes")
    res = np.max(abs(M @ D)) / np.max(abs(B))
    return CrossingResult(D, float(res))


# -- extension coefficients --------------------------------------------------


@dataclass
class ExtensionCoefficients:
    level: int
    support: tuple[int, ...]
    values: dict[tuple[int, int, int], complex]  # (λ, λ1, λ2) ↦ c^{λ2}_{λ,λ1}
    residual: float
    reduced_residual: float

    def c(self, lam: int, l1: int, l2: int) -> complex:
        return self.values.get((lam, l1, l2), 0)

    def to_dict(self) -> dict:
        return {
            "support": list(self.support),
            "c": {f"c^{k[2]}_{k[0]},{k[1]}": [v.real, v.imag] for k, v in sorted(self.values.items())},
            "residual": self.residual,
            "reducedResidual": self.reduced_residual,
        }


def support_braidings(level: int, support: Sequence[int]) -> dict[tuple[int, int, int, int], BraidingMatrix]:
    out = {}
    for labels in product(support, repeat=4):
        try:
            cfg = FourPointConfig(level, labels)
            out[labels] = braiding(build_system(cfg))
        except (EmptySubspace, ValueError):
            continue
    return out


def extension_system_residual(
    family: dict[tuple[int, int, int, int], BraidingMatrix], coeff: Callable[[int, int, int], complex]
) -> float:
    """max over configurations and exchange channels γ of |Σ_μ c c B_{μγ} - c c|, relative."""
    worst = 0.0
    scale = 0.0
    for (l1, l2, l3, l4), bm in family.items():
        lhs = np.zeros(len(bm.exchange_channels), dtype=complex)
        for i, mu in enumerate(bm.channels):
            lhs += coeff(l3, mu, l4) * coeff(l2, l1, mu) * bm.B[i]
        rhs = np.array([coeff(l2, g, l4) * coeff(l3, l1, g) for g in bm.exchange_channels])
        worst = max(worst, float(np.max(abs(lhs - rhs))))
        scale = max(scale, float(np.max(abs(rhs))) if len(rhs) else 0.0)
    return worst / scale if scale else worst


def solve_extension_coefficients(
    family: dict[tuple[int, int, int, int], BraidingMatrix], level: int, support: Sequence[int] = (0, 6)
) -> ExtensionCoefficients:
    """Gauge c^6_{6,0} = 1 and c^0_{6,6} = 1 (the a ∈ ℂ* family), solve the two-equation
    reduction for (c^6_{6,6})^2, then back-check every configuration in support^4."""
    lam = max(support)
    if tuple(sorted(support)) == (0,):
        return ExtensionCoefficients(level, (0,), {(0, 0, 0): 1}, 0.0, 0.0)
    bm = family[(lam, lam, lam, lam)]
    i0 = bm.channels.index(0)
    i6 = bm.channels.index(lam)
    j0 = bm.exchange_channels.index(0)
    j6 = bm.exchange_channels.index(lam)
    B = bm.B
    # x B00 + y B60 = x and x B06 + y B66 = y with x = c^6_{60} c^0_{66} = 1
    A = np.array([[B[i6, j0]], [B[i6, j6] - 1]])
    b = np.array([1 - B[i0, j0], -B[i0, j6]])
    y, *_ = np.linalg.lstsq(A, b, rcond=None)
    y = complex(y[0])
    reduced = float(np.max(abs(A[:, 0] * y - b)))
    if abs(y) < 1e-12:
        raise NoNonzeroSolution("(c^6_{6,6})^2 vanishes")
    w = cmath.sqrt(y)
    values = {(0, 0, 0): 1, (0, lam, lam): 1, (lam, 0, lam): 1, (lam, lam, 0): 1, (lam, lam, lam): w}
    coeff = lambda a, b_, c: values.get((a, b_, c), 0)
    res = extension_system_residual(family, coeff)
    return ExtensionCoefficients(level, tuple(support), values, res, reduced)


def gauge_family(ext: ExtensionCoefficients, a: complex) -> ExtensionCoefficients:
    lam = max(ext.support)
    v = dict(ext.values)
    v[(lam, lam, 0)] = v[(lam, lam, 0)] * a**2
    v[(lam, lam, lam)] = v[(lam, lam, lam)] * a
    return ExtensionCoefficients(ext.level, ext.support, v, float("nan"), ext.reduced_residual)


# -- mirror braiding ---------------------------------------------------------


def mirror_braiding(B: np.ndarray) -> np.ndarray:
    cond = np.linalg.cond(B)
    if cond > 1e8:
        raise IllConditioned(f"condition number {cond:.3g}")
    return np.linalg.inv(B.T)


def mirror_residual(B: np.ndarray, Bdot: np.ndarray) -> float:
    """max |Σ_μ B_{μγ} Ḃ_{μγ'} - δ_{γγ'}|."""
    return float(np.max(abs(B.T @ Bdot - np.eye(B.shape[0]))))


def mirror_coefficient_residual(bm: BraidingMatrix, ext: ExtensionCoefficients, D: np.ndarray) -> float:
    """Dotted system Σ_μ ċ_μ Ḃ_{μγ} = ċ_γ with ċ_μ = (c c)_μ / D_μ."""
    lam = max(ext.support)
    C = np.array([ext.c(lam, mu, lam) * ext.c(lam, lam, mu) for mu in bm.channels])
    v = C / D
    Bdot = mirror_braiding(bm.B)
    return float(np.max(abs(v @ Bdot - v)) / np.max(abs(v)))


# -- monodromy ---------------------------------------------------------------


@dataclass
class MonodromyReport:
    residual_0: float
    residual_1: float
    negative_control_0: float
    negative_control_1: float

    @property
    def residual(self) -> float:
        return max(self.residual_0, self.residual_1)

    @property
    def passed(self) -> bool:
        return self.residual < 1e-6

    @property
    def control_detected(self) -> bool:
        """Single-channel blocks cannot register a coefficient change; this is False there."""
        return max(self.negative_control_0, self.negative_control_1) > 1e-3

    def to_dict(self) -> dict:
        return {
            "residual0": self.residual_0,
            "residual1": self.residual_1,
            "negativeControl0": self.negative_control_0,
            "negativeControl1": self.negative_control_1,
            "controlDetected": self.control_detected,
            "pass": self.passed,
        }


def monodromy_residuals(system: KZSystem, phys: PhysicalBasis, weights: dict[int, complex]) -> tuple[float, float]:
    psi = sum(weights.get(lab, 0) * v for lab, v in zip(phys.labels, phys.values))
    out = []
    for point in (0, 1):
        U = transport(system, loop_path(point))
        out.append(float(np.linalg.norm(U @ psi - psi) / np.linalg.norm(psi)))
    return out[0], out[1]


def rationality_certificate(
    system: KZSystem, ext: ExtensionCoefficients, perturbation: float = 0.10, phys: PhysicalBasis | None = None
) -> MonodromyReport:
    """Loops around ξ = 0 and ξ = 1 applied to Ψ_ext = Σ_μ c^{λ4}_{λ3,μ} c^μ_{λ2,λ1} Ψ_μ;
    the control perturbs c^λ_{λ,λ} by the given fraction."""
    phys = phys or physical_basis(system)
    l1, l2, l3, l4 = system.config.labels
    lam = max(ext.support)
    w = {mu: ext.c(l3, mu, l4) * ext.c(l2, l1, mu) for mu in phys.labels}
    r0, r1 = monodromy_residuals(system, phys, w)
    bumped = dict(ext.values)
    bumped[(lam, lam, lam)] = bumped.get((lam, lam, lam), 0) * (1 + perturbation)
    c2 = lambda a, b, c: bumped.get((a, b, c), 0)
    w2 = {mu: c2(l3, mu, l4) * c2(l2, l1, mu) for mu in phys.labels}
    n0, n1 = monodromy_residuals(system, phys, w2)
    return MonodromyReport(r0, r1, n0, n1)


# -- reports -----------------------------------------------------------------


def braid_squared_check(system: KZSystem, bm: BraidingMatrix, phys: PhysicalBasis) -> float:
    """For symmetric configurations, B·B equals the clockwise monodromy around ξ = 1
    in the channel basis at ξ = 0."""
    U = transport(system, [(z, dz) for z, dz in reversed([_arc(1, 0.5, 3 * math.pi, math.pi)])])
    moved = phys.values @ U.T
    pred = (bm.B @ bm.B) @ phys.values
    return float(np.linalg.norm(moved - pred) / np.linalg.norm(moved))


def kz_report(level: int, labels: Sequence[int], support: Sequence[int] | None = None) -> dict:
    """Braiding report for one configuration.

    With an extension support containing all four labels, the coefficient
    system over support^4 is solved and the extension correlator's monodromy
    is added to the residuals.
    """
    cfg = FourPointConfig(level, tuple(labels))
    system = build_system(cfg)
    phys = physical_basis(system)
    bm = braiding(system, phys)
    alt = braiding(system, phys, path="polyline")
    residuals: dict[str, float] = {
        "fit": bm.fit_residual,
        "physicalSpan": phys.residual,
        "pathIndependence": float(np.max(abs(bm.B - alt.B))),
    }
    report: dict = {
        "config": {"level": level, "labels": list(labels)},
        "dimension": system.dimension,
        "channels": bm.channels,
        "exponents": [str(e) for e in phys.exponents],
        "B": bm.to_dict()["B"],
    }
    ok = bm.fit_residual < 1e-8 and phys.residual < 1e-8 and residuals["pathIndependence"] < 1e-8
    l1, l2, l3, l4 = cfg.labels
    if l2 == l3 and l1 == l4:
        cr = crossing_check(bm)
        residuals["crossing"] = cr.residual
        residuals["braidSquared"] = braid_squared_check(system, bm, phys)
        report["T"] = [[float(z.real), float(z.imag)] for z in cr.D]
        ok = ok and cr.passed and residuals["braidSquared"] < 1e-6
    if support is not None and set(cfg.labels) <= set(support) and len(set(support)) > 1:
        family = support_braidings(level, support)
        ext = solve_extension_coefficients(family, level, support)
        mono = rationality_certificate(system, ext, phys=phys)
        residuals["extensionSystem"] = ext.residual
        residuals["monodromy"] = mono.residual
        report["extension"] = ext.to_dict()
        report["monodromy"] = mono.to_dict()
        ok = ok and ext.residual < 1e-8 and mono.passed
    report["residuals"] = residuals
    report["pass"] = bool(ok)
    return report


def kz_report_json(level: int, labels: Sequence[int], support: Sequence[int] | None = None) -> str:
    return json.dumps(kz_report(level, labels, support), sort_keys=True)
