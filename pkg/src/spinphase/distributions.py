"""P, Q and F distributions on the sphere for spin states.

All three distributions share the shape

    W(theta, phi) = (1/sqrt(4 pi)) sum_kq sigma(k, q) c_k t^k_q Y*_{kq},

where sigma(k, q) = (-1)^(k+q) for the P and Q kinds and 1 for F, and the
coefficients c_k are

    P:  (1/(2s)!) sqrt((2s-k)! (2s+k+1)! / (2s+1))
    Q:  (2s)!     sqrt((2s+1) / ((2s-k)! (2s+k+1)!))
    F:  2^(-k)    sqrt((2s+k+1)! / ((2s-k)! (2s+1) {s(s+1)}^k))

The stored F coefficient absorbs a sqrt(4 pi) relative to the raw
characteristic-function normalization so that c_0 = 1 for every kind and the
three expansions take the uniform prefactor; divide by sqrt(4 pi) to recover
the raw value.  P and Q coefficients are exact inverses of each other.

Bipartite distributions take the squared prefactor 1/(4 pi) and one
(c, sigma) factor per subsystem.  Evaluation is O((2s+1)^2) per point via a
precomputed harmonic table; coefficient tables are cached per (kind, s) and
immutable, so everything here is safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .angular import (
    HalfInteger,
    harmonic_table,
    legendre_sequence,
    log_factorial,
    require_spin,
)
from .errors import BandLimitError, ConsistencyError, DomainError
from .fano import CoupledFanoTensorSet, DensityMatrix, FanoTensorSet, singlet_tensors
from .quadrature import SphereGrid
from .tensor_ops import operator_components

__all__ = [
    "DistributionKind",
    "CoefficientTable",
    "SpinCoherentState",
    "DirectionVector",
    "coefficient",
    "coefficient_table",
    "coherent_state",
    "q_direct",
    "evaluate",
    "evaluate_many",
    "evaluate_bipartite",
    "evaluate_bipartite_many",
    "classical_spin_vector",
    "expectation",
    "singlet_profile",
    "correlation",
    "correlation_exact",
    "classical_limit_table",
]

_SQRT4PI = math.sqrt(4.0 * math.pi)
_IMAG_TOL = 1e-9


class DistributionKind(Enum):
    """Selector for the three sphere distributions."""

    P = "P"
    Q = "Q"
    F = "F"

    @classmethod
    def from_string(cls, name: str) -> "DistributionKind":
        try:
            return cls[str(name).upper()]
        except KeyError:
            raise DomainError(f"unknown distribution kind {name!r}, expected P, Q or F")


def coefficient(kind: DistributionKind, s, k: int) -> float:
    """Expansion coefficient c_k for the given kind and spin.

    Evaluated in log-factorial space; c_0 = 1 for every kind and all
    coefficients are positive.  Every kind tends to 1 as s grows at fixed k.
    """
    ts = require_spin(s)
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise DomainError(f"rank k must be an integer, got {k!r}")
    if k < 0 or k > ts:
        raise DomainError(f"rank k={k} outside 0..2s={ts}")
    lf = log_factorial
    if kind is DistributionKind.P:
        return math.exp(0.5 * (lf(ts - k) + lf(ts + k + 1) - math.log(ts + 1.0)) - lf(ts))
    if kind is DistributionKind.Q:
        return math.exp(lf(ts) + 0.5 * (math.log(ts + 1.0) - lf(ts - k) - lf(ts + k + 1)))
    # F: radius constrained to sqrt(s(s+1)); s(s+1) = ts(ts+2)/4 exactly.
    # the radius power is 1 at k = 0, so s = 0 never reaches the log
    radius_term = k * math.log(ts * (ts + 2) / 4.0) if k else 0.0
    return math.exp(
        0.5 * (lf(ts + k + 1) - lf(ts - k) - math.log(ts + 1.0) - radius_term)
        - k * math.log(2.0)
    )


@dataclass(frozen=True)
class CoefficientTable:
    """Cached coefficients c_k, k = 0..2s, for one (kind, spin) pair."""

    s: HalfInteger
    kind: DistributionKind
    values: tuple

    @classmethod
    def build(cls, kind: DistributionKind, s) -> "CoefficientTable":
        ts = require_spin(s)
        vals = tuple(coefficient(kind, s, k) for k in range(ts + 1))
        return cls(HalfInteger(ts), kind, vals)


@lru_cache(maxsize=4096)
def _table_cached(kind: DistributionKind, ts: int) -> CoefficientTable:
    return CoefficientTable.build(kind, HalfInteger(ts))


def coefficient_table(kind: DistributionKind, s) -> CoefficientTable:
    return _table_cached(kind, require_spin(s))


@dataclass(frozen=True)
class SpinCoherentState:
    """Maximal-weight spin state rotated to point along (theta, phi)."""

    s: HalfInteger
    theta: float
    phi: float
    amplitudes: np.ndarray

    def __post_init__(self):
        norm = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise ConsistencyError(f"coherent state norm {norm} deviates from 1")
        self.amplitudes.setflags(write=False)


def coherent_state(s, theta: float, phi: float) -> SpinCoherentState:
    """Spin coherent (Bloch) state with amplitudes

    <s m|theta phi> = sqrt(C(2s, s+m)) cos(theta/2)^(s-m) sin(theta/2)^(s+m)
                       exp(-i (s+m) phi)

    in the descending-m ordering.  theta = 0 gives |s, -s>; theta = pi gives
    |s, +s> up to the phase exp(-i 2s phi).
    """
    ts = require_spin(s)
    theta = float(theta) % (2.0 * math.pi)
    phi = float(phi) % (2.0 * math.pi)
    c = math.cos(0.5 * theta)
    sn = math.sin(0.5 * theta)
    amps = np.empty(ts + 1, dtype=complex)
    for i in range(ts + 1):
        # index i holds m = s - i, so s - m = i and s + m = 2s - i
        mag = math.sqrt(math.comb(ts, i)) * c**i * sn ** (ts - i)
        ang = -(ts - i) * phi
        amps[i] = mag * (math.cos(ang) + 1j * math.sin(ang))
    return SpinCoherentState(HalfInteger(ts), theta, phi, amps)


@dataclass(frozen=True)
class DirectionVector:
    """Unit vector on the sphere (validated to 1e-12)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for comp in (self.x, self.y, self.z):
            if not math.isfinite(comp):
                raise DomainError("direction components must be finite")
        norm = math.sqrt(self.x**2 + self.y**2 + self.z**2)
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"direction must be a unit vector, |v| = {norm:.15g}")

    @classmethod
    def from_any(cls, v) -> "DirectionVector":
        if isinstance(v, DirectionVector):
            return v
        arr = np.asarray(v, dtype=float).reshape(-1)
        if arr.shape != (3,):
            raise DomainError(f"direction must have three components, got {v!r}")
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    @classmethod
    def normalized(cls, v) -> "DirectionVector":
        arr = np.asarray(v, dtype=float).reshape(-1)
        if arr.shape != (3,):
            raise DomainError(f"direction must have three components, got {v!r}")
        norm = float(np.linalg.norm(arr))
        if norm <= 0.0 or not math.isfinite(norm):
            raise DomainError("cannot normalize a zero or non-finite vector")
        arr = arr / norm
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def q_direct(rho: DensityMatrix, theta: float, phi: float) -> float:
    """Q function straight from its definition,

    Q(theta, phi) = (2s+1)/(4 pi) <theta phi| rho |theta phi>.

    Nonnegative up to roundoff; independent route against evaluate(Q, ...).
    """
    scs = coherent_state(rho.s, theta, phi)
    a = scs.amplitudes
    overlap = complex(np.conj(a) @ rho.matrix @ a)
    return (rho.dim / (4.0 * math.pi)) * overlap.real


def _sign_matrix(kind: DistributionKind, ts: int) -> np.ndarray:
    out = np.ones((ts + 1, 2 * ts + 1))
    if kind is DistributionKind.F:
        return out
    for k in range(ts + 1):
        for q in range(-k, k + 1):
            if (k + q) % 2:
                out[k, ts + q] = -1.0
    return out


def _weighted_label_array(kind: DistributionKind, t_array: np.ndarray, ts: int) -> np.ndarray:
    table = np.asarray(_table_cached(kind, ts).values)
    return t_array * _sign_matrix(kind, ts) * table[:, None]


def _require_real(values: np.ndarray, context: str) -> np.ndarray:
    residue = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if residue > _IMAG_TOL:
        raise ConsistencyError(f"{context}: imaginary residue {residue:.3e} exceeds {_IMAG_TOL}")
    return values.real


def evaluate_many(kind: DistributionKind, t: FanoTensorSet, theta, phi) -> np.ndarray:
    """Vectorized distribution values at paired angle arrays."""
    ts = t.s.twice_value
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    y = harmonic_table(ts, theta, phi)
    weighted = _weighted_label_array(kind, t.as_array(), ts)
    vals = np.einsum("ab,abn->n", weighted, np.conj(y)) / _SQRT4PI
    return _require_real(vals, f"evaluate({kind.value})")


def evaluate(kind: DistributionKind, t: FanoTensorSet, theta: float, phi: float) -> float:
    """Distribution value at a single point of the sphere."""
    return float(evaluate_many(kind, t, [theta], [phi])[0])


def evaluate_bipartite_many(
    kind: DistributionKind,
    t12: CoupledFanoTensorSet,
    theta1,
    phi1,
    theta2,
    phi2,
) -> np.ndarray:
    """Joint distribution on the outer product of two point sets.

    Returns shape (len(theta1), len(theta2)).
    """
    ts1 = t12.s1.twice_value
    ts2 = t12.s2.twice_value
    y1 = harmonic_table(ts1, np.atleast_1d(theta1), np.atleast_1d(phi1))
    y2 = harmonic_table(ts2, np.atleast_1d(theta2), np.atleast_1d(phi2))
    t4 = t12.as_array()
    c1 = np.asarray(_table_cached(kind, ts1).values)
    c2 = np.asarray(_table_cached(kind, ts2).values)
    w1 = _sign_matrix(kind, ts1) * c1[:, None]
    w2 = _sign_matrix(kind, ts2) * c2[:, None]
    t4w = t4 * w1[:, :, None, None] * w2[None, None, :, :]
    vals = np.einsum("abcd,abn,cdm->nm", t4w, np.conj(y1), np.conj(y2), optimize=True)
    return _require_real(vals / (4.0 * math.pi), f"evaluate_bipartite({kind.value})")


def evaluate_bipartite(
    kind: DistributionKind,
    t12: CoupledFanoTensorSet,
    theta1: float,
    phi1: float,
    theta2: float,
    phi2: float,
) -> float:
    """Joint distribution value at one pair of directions."""
    return float(
        evaluate_bipartite_many(kind, t12, [theta1], [phi1], [theta2], [phi2])[0, 0]
    )


def _bloch_vector(theta, phi, flip_z: bool) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    sin_t = np.sin(theta)
    z = -np.cos(theta) if flip_z else np.cos(theta)
    return np.stack([sin_t * np.cos(phi), sin_t * np.sin(phi), z], axis=-1)


def classical_spin_vector(kind: DistributionKind, s, theta: float, phi: float) -> np.ndarray:
    """Classical spin vector the kind associates with a point of the sphere.

    P maps to s * n(pi-theta, phi), Q to (s+1) * n(pi-theta, phi), F to
    sqrt(s(s+1)) * n(theta, phi), with n(pi-theta, phi) =
    (sin t cos p, sin t sin p, -cos t).
    """
    ts = require_spin(s)
    s_val = ts / 2.0
    if kind is DistributionKind.P:
        return s_val * _bloch_vector(theta, phi, flip_z=True)
    if kind is DistributionKind.Q:
        return (s_val + 1.0) * _bloch_vector(theta, phi, flip_z=True)
    return math.sqrt(s_val * (s_val + 1.0)) * _bloch_vector(theta, phi, flip_z=False)


def expectation(
    kind: DistributionKind,
    t: FanoTensorSet,
    a: np.ndarray,
    grid: SphereGrid,
) -> float:
    """Quantum expectation Tr(rho A) as a classical sphere average.

    The operator is mapped to a classical function through the kind's
    correspondence rule (weight sqrt(4 pi)/c_k per rank); integrating it
    against the distribution reproduces the trace for any grid that is exact
    at band 2s.
    """
    ts = t.s.twice_value
    if grid.band_limit < ts:
        raise BandLimitError(
            f"grid band limit {grid.band_limit} is below 2s = {ts}; the sphere "
            "average would not be exact"
        )
    a = np.asarray(a, dtype=complex)
    if a.shape != (ts + 1, ts + 1):
        raise DomainError(
            f"operator shape {a.shape} does not match the spin-{ts}/2 space"
        )
    comps = operator_components(a)
    amat = np.zeros((ts + 1, 2 * ts + 1), dtype=complex)
    for (k, q), v in comps.items():
        amat[k, ts + q] = v
    table = np.asarray(_table_cached(kind, ts).values)
    # the operator resolution carries 1/(2s+1); its classical image inherits it
    inverse_weight = _SQRT4PI / (table * (ts + 1.0))
    weighted = amat * _sign_matrix(kind, ts) * inverse_weight[:, None]
    y = harmonic_table(ts, grid.node_thetas, grid.node_phis)
    a_classical = np.einsum("ab,abn->n", weighted, np.conj(y))
    w_vals = evaluate_many(kind, t, grid.node_thetas, grid.node_phis)
    integrand = w_vals * a_classical
    total = complex(
        math.fsum(grid.weights * integrand.real),
        math.fsum(grid.weights * integrand.imag),
    )
    if abs(total.imag) > _IMAG_TOL:
        raise ConsistencyError(
            f"expectation({kind.value}): imaginary residue {total.imag:.3e}"
        )
    return total.real


def singlet_profile(kind: DistributionKind, s, theta12):
    """Joint singlet distribution as a function of the angle between the two
    directions:

    W(theta12) = (1/(4 pi)^2) sum_k (-1)^k (2k+1) c_k^2 P_k(cos theta12).

    Accepts a scalar or array of angles.
    """
    ts = require_spin(s)
    if ts < 1:
        raise DomainError("singlet profile requires 2s >= 1")
    theta12 = np.asarray(theta12, dtype=float)
    scalar = theta12.ndim == 0
    x = np.cos(np.atleast_1d(theta12))
    p = legendre_sequence(ts, x)
    c = np.asarray(_table_cached(kind, ts).values)
    k = np.arange(ts + 1)
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    coeffs = signs * (2 * k + 1) * c**2
    vals = (coeffs @ p) / (4.0 * math.pi) ** 2
    return float(vals[0]) if scalar else vals


def correlation_exact(s, a, b) -> float:
    """Closed-form joint spin correlation -s(s+1)/3 (a . b) for the singlet."""
    ts = require_spin(s)
    av = DirectionVector.from_any(a).as_array()
    bv = DirectionVector.from_any(b).as_array()
    s_val = ts / 2.0
    return -s_val * (s_val + 1.0) / 3.0 * float(av @ bv)


def correlation(kind: DistributionKind, s, a, b, grid: SphereGrid) -> float:
    """Quadrature value of <(S1 . a)(S2 . b)> in the spin-s singlet.

    The integrand weights the joint distribution with the kind's classical
    vectors: magnitude s (P), s+1 (Q) or sqrt(s(s+1)) (F), with P and Q
    reading directions as n(pi-theta, phi).  Exact (to roundoff) whenever
    the grid integrates products of band 2s and band 1 harmonics, i.e. for
    2 * band_limit + 1 >= 2s + 1.
    """
    ts = require_spin(s)
    if ts < 1:
        raise DomainError("correlation requires 2s >= 1")
    if grid.band_limit < 2:
        raise BandLimitError(
            f"grid band limit {grid.band_limit} is below the required minimum 2"
        )
    av = DirectionVector.from_any(a).as_array()
    bv = DirectionVector.from_any(b).as_array()
    s_val = ts / 2.0
    if kind is DistributionKind.P:
        prefactor = s_val**2
    elif kind is DistributionKind.Q:
        prefactor = (s_val + 1.0) ** 2
    else:
        prefactor = s_val * (s_val + 1.0)
    flip = kind is not DistributionKind.F
    nodes = _bloch_vector(grid.node_thetas, grid.node_phis, flip_z=flip)
    w12 = evaluate_bipartite_many(
        kind,
        singlet_tensors(s),
        grid.node_thetas,
        grid.node_phis,
        grid.node_thetas,
        grid.node_phis,
    )
    left = grid.weights * (nodes @ av)
    right = grid.weights * (nodes @ bv)
    return float(prefactor * (left @ w12 @ right))


def classical_limit_table(kind: DistributionKind, k: int, s_list) -> list[float]:
    """coefficient(kind, s, k) for each listed spin; approaches 1 as s grows."""
    out = []
    for s in s_list:
        ts = require_spin(s)
        if k > ts:
            raise DomainError(f"rank k={k} exceeds 2s={ts} for listed spin {ts}/2")
        out.append(coefficient(kind, HalfInteger(ts), k))
    return out
