"""Angular-momentum special functions with exact half-integer bookkeeping.

Phase choices follow the Condon-Shortley convention throughout.  Spherical
harmonics are the orthonormal physics-convention ones, so that
Y*_{kq} = (-1)^q Y_{k,-q}.  Wigner rotations use the active z-y-z Euler
decomposition

    D^k_{q'q}(alpha, beta, gamma) = exp(-i q' alpha) d^k_{q'q}(beta) exp(-i q gamma),

which makes R tau^k_q R^dag = sum_{q'} D^k_{q'q} tau^k_{q'} for irreducible
tensor operators.  Spins and projections are carried as twice-value integers
so half-integer arithmetic stays exact.

All functions here are pure; the factorial table is immutable after import,
so everything is safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

__all__ = [
    "HalfInteger",
    "log_factorial",
    "clebsch_gordan",
    "legendre",
    "legendre_sequence",
    "spherical_harmonic",
    "harmonic_table",
    "wigner_d",
    "wigner_D",
    "wigner_D_matrix",
]

_TABLE_MAX = 500


def _build_log_factorials(n_max):
    # ln of the exact integer factorial; accurate to ~1 ulp of the result.
    logs = [0.0] * (n_max + 1)
    acc = 1
    for n in range(1, n_max + 1):
        acc *= n
        logs[n] = math.log(acc)
    return tuple(logs)


_LOG_FACTORIAL = _build_log_factorials(_TABLE_MAX)


def log_factorial(n: int) -> float:
    """Return ln(n!) for a nonnegative integer n.

    Table-backed (exact-integer logarithms) for n <= 500, lgamma beyond.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise DomainError(f"log_factorial expects an integer, got {n!r}")
    if n < 0:
        raise DomainError(f"log_factorial expects n >= 0, got {n}")
    if n <= _TABLE_MAX:
        return _LOG_FACTORIAL[n]
    return math.lgamma(n + 1.0)


@dataclass(frozen=True, order=True)
class HalfInteger:
    """Exact spin or projection value, stored as twice its value."""

    twice_value: int

    def __post_init__(self):
        if isinstance(self.twice_value, bool) or not isinstance(
            self.twice_value, (int, np.integer)
        ):
            raise DomainError(f"twice_value must be an integer, got {self.twice_value!r}")
        object.__setattr__(self, "twice_value", int(self.twice_value))

    @classmethod
    def from_value(cls, value) -> "HalfInteger":
        """Coerce a number (or HalfInteger) whose double is an integer."""
        if isinstance(value, HalfInteger):
            return value
        doubled = 2.0 * float(value)
        rounded = round(doubled)
        if abs(doubled - rounded) > 1e-9:
            raise DomainError(f"{value!r} is not a half-integer")
        return cls(int(rounded))

    @property
    def value(self) -> float:
        return self.twice_value / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def __neg__(self) -> "HalfInteger":
        return HalfInteger(-self.twice_value)

    def __add__(self, other):
        if isinstance(other, HalfInteger):
            return HalfInteger(self.twice_value + other.twice_value)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, HalfInteger):
            return HalfInteger(self.twice_value - other.twice_value)
        return NotImplemented

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"


def require_spin(s) -> int:
    """Validate a spin value and return its twice-value integer."""
    ts = HalfInteger.from_value(s).twice_value
    if ts < 0:
        raise DomainError(f"spin must be nonnegative, got {ts / 2.0}")
    return ts


def require_projection(ts: int, m) -> int:
    """Validate a projection against spin twice-value ts; return twice-value."""
    tm = HalfInteger.from_value(m).twice_value
    if (tm - ts) % 2 != 0:
        raise DomainError(
            f"projection {tm}/2 has wrong parity for spin {ts}/2 (both must be "
            "integers or both half-odd-integers)"
        )
    if abs(tm) > ts:
        raise DomainError(f"projection {tm}/2 exceeds spin {ts}/2 in magnitude")
    return tm


def clebsch_gordan(s1, s2, s, m1, m2, m) -> float:
    """Clebsch-Gordan coefficient <s1 m1; s2 m2 | s m> (Condon-Shortley, real).

    Evaluated by the Racah single-sum formula in log-factorial space with
    explicit sign bookkeeping and compensated summation.  Selection-rule
    violations (m != m1 + m2, triangle rule) return 0 by contract; an invalid
    spin/projection pairing raises DomainError.
    """
    ts1 = require_spin(s1)
    ts2 = require_spin(s2)
    ts = require_spin(s)
    tm1 = require_projection(ts1, m1)
    tm2 = require_projection(ts2, m2)
    tm = require_projection(ts, m)
    if tm1 + tm2 != tm:
        return 0.0
    if ts < abs(ts1 - ts2) or ts > ts1 + ts2 or (ts1 + ts2 + ts) % 2 != 0:
        return 0.0
    return _cg_core(ts1, ts2, ts, tm1, tm2, tm)


@lru_cache(maxsize=1_000_000)
def _cg_core(ts1, ts2, ts, tm1, tm2, tm):
    lf = log_factorial
    half_log_pref = 0.5 * (
        math.log(ts + 1.0)
        + lf((ts1 + ts2 - ts) // 2)
        + lf((ts1 - ts2 + ts) // 2)
        + lf((ts2 + ts - ts1) // 2)
        - lf((ts1 + ts2 + ts) // 2 + 1)
        + lf((ts1 + tm1) // 2)
        + lf((ts1 - tm1) // 2)
        + lf((ts2 + tm2) // 2)
        + lf((ts2 - tm2) // 2)
        + lf((ts + tm) // 2)
        + lf((ts - tm) // 2)
    )
    t_lo = max(0, (ts2 - ts - tm1) // 2, (ts1 - ts + tm2) // 2)
    t_hi = min((ts1 + ts2 - ts) // 2, (ts1 - tm1) // 2, (ts2 + tm2) // 2)
    if t_hi < t_lo:
        return 0.0
    logs = []
    signs = []
    for t in range(t_lo, t_hi + 1):
        log_den = (
            lf(t)
            + lf((ts1 + ts2 - ts) // 2 - t)
            + lf((ts1 - tm1) // 2 - t)
            + lf((ts2 + tm2) // 2 - t)
            + lf((ts - ts2 + tm1) // 2 + t)
            + lf((ts - ts1 - tm2) // 2 + t)
        )
        logs.append(-log_den)
        signs.append(-1.0 if t % 2 else 1.0)
    peak = max(logs)
    total = math.fsum(sg * math.exp(lg - peak) for sg, lg in zip(signs, logs))
    if total == 0.0:
        return 0.0
    return math.copysign(math.exp(half_log_pref + peak + math.log(abs(total))), total)


def legendre(k: int, x: float) -> float:
    """Legendre polynomial P_k(x) on [-1, 1] by the Bonnet recurrence."""
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 0:
        raise DomainError(f"legendre expects integer k >= 0, got {k!r}")
    x = float(x)
    if abs(x) > 1.0:
        raise DomainError(f"legendre expects |x| <= 1, got {x}")
    if k == 0:
        return 1.0
    p_prev, p = 1.0, x
    for n in range(1, k):
        p_prev, p = p, ((2 * n + 1) * x * p - n * p_prev) / (n + 1)
    return p


def legendre_sequence(k_max: int, x) -> np.ndarray:
    """All P_k(x) for k = 0..k_max; x may be a scalar or 1-d array.

    Returns shape (k_max + 1,) + shape(x).
    """
    if k_max < 0:
        raise DomainError("k_max must be >= 0")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("legendre_sequence expects |x| <= 1")
    out = np.empty((k_max + 1,) + x.shape, dtype=float)
    out[0] = 1.0
    if k_max >= 1:
        out[1] = x
    for n in range(1, k_max):
        out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1)
    return out


def _norm_legendre_table(k_max: int, x: np.ndarray) -> np.ndarray:
    """Fully normalized associated Legendre table Pbar[k, q] for q >= 0.

    Normalization includes the Condon-Shortley phase and the 1/sqrt(4 pi), so
    Y_{kq} = Pbar[k, q] * exp(i q phi).  Forward recurrence in the degree on
    the normalized functions keeps values O(1) at high k.
    """
    n = x.shape[0]
    out = np.zeros((k_max + 1, k_max + 1, n), dtype=float)
    sin_t = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    out[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
    for q in range(k_max + 1):
        if q > 0:
            out[q, q] = -math.sqrt((2.0 * q + 1.0) / (2.0 * q)) * sin_t * out[q - 1, q - 1]
        if q + 1 <= k_max:
            out[q + 1, q] = math.sqrt(2.0 * q + 3.0) * x * out[q, q]
        for k in range(q + 2, k_max + 1):
            a = math.sqrt((4.0 * k * k - 1.0) / (k * k - q * q))
            b = math.sqrt(((k - 1.0) ** 2 - q * q) / (4.0 * (k - 1.0) ** 2 - 1.0))
            out[k, q] = a * (x * out[k - 1, q] - b * out[k - 2, q])
    return out


def harmonic_table(k_max: int, theta, phi) -> np.ndarray:
    """Spherical harmonics Y_{kq} for all k <= k_max at the given points.

    theta, phi are scalars or equal-length 1-d arrays; the result has shape
    (k_max + 1, 2 k_max + 1, n_points) indexed [k, k_max + q, point], zero
    where |q| > k.
    """
    if k_max < 0:
        raise DomainError("k_max must be >= 0")
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    if theta.shape != phi.shape or theta.ndim != 1:
        raise DomainError("theta and phi must be equal-length 1-d arrays")
    pbar = _norm_legendre_table(k_max, np.cos(theta))
    out = np.zeros((k_max + 1, 2 * k_max + 1, theta.shape[0]), dtype=complex)
    for q in range(k_max + 1):
        phase = np.exp(1j * q * phi)
        sign = -1.0 if q % 2 else 1.0
        for k in range(q, k_max + 1):
            out[k, k_max + q] = pbar[k, q] * phase
            if q > 0:
                # Y_{k,-q} = (-1)^q conj(Y_{kq})
                out[k, k_max - q] = sign * pbar[k, q] * np.conj(phase)
    return out


def spherical_harmonic(k: int, q: int, theta: float, phi: float) -> complex:
    """Y_{kq}(theta, phi), physics convention with Condon-Shortley phase."""
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 0:
        raise DomainError(f"spherical_harmonic expects integer k >= 0, got {k!r}")
    if not isinstance(q, (int, np.integer)) or abs(q) > k:
        raise DomainError(f"spherical_harmonic expects integer |q| <= k, got q={q!r}")
    table = harmonic_table(k, [float(theta)], [float(phi)])
    return complex(table[k, k + q, 0])


def _require_rank_pair(rank, comp) -> tuple[int, int]:
    tk = require_spin(rank)
    tq = require_projection(tk, comp)
    return tk, tq


@lru_cache(maxsize=20_000)
def _small_d_matrix(tk: int, beta: float) -> np.ndarray:
    """d^k(beta) = exp(-i beta Jy) in the descending-m basis.

    Built from the exact eigendecomposition of the tridiagonal generator;
    unitary to roundoff at any rank, unlike the alternating single-sum
    element formula, which loses all precision near k ~ 50.
    """
    n = tk + 1
    j = tk / 2.0
    jp = np.zeros((n, n), dtype=complex)
    for i in range(1, n):
        m = j - i
        jp[i - 1, i] = math.sqrt(j * (j + 1.0) - m * (m + 1.0))
    jy = (jp - jp.conj().T) / 2j
    evals, vecs = np.linalg.eigh(jy)
    d = (vecs * np.exp(-1j * beta * evals)) @ vecs.conj().T
    # d is real in this convention; the eigh product leaves rounding noise
    out = d.real.copy()
    out.setflags(write=False)
    return out


def _wigner_d_core(tk: int, tqp: int, tq: int, beta: float) -> float:
    d = _small_d_matrix(tk, float(beta))
    return float(d[(tk - tqp) // 2, (tk - tq) // 2])


def wigner_d(k, qp, q, beta: float) -> float:
    """Wigner small-d element d^k_{q'q}(beta); k may be half-integer."""
    tk, tqp = _require_rank_pair(k, qp)
    _, tq = _require_rank_pair(k, q)
    return _wigner_d_core(tk, tqp, tq, float(beta))


def wigner_D(k, qp, q, alpha: float, beta: float, gamma: float) -> complex:
    """Rotation-matrix element D^k_{q'q}(alpha, beta, gamma), z-y-z convention."""
    tk, tqp = _require_rank_pair(k, qp)
    _, tq = _require_rank_pair(k, q)
    d = _wigner_d_core(tk, tqp, tq, float(beta))
    phase = -0.5 * (tqp * float(alpha) + tq * float(gamma))
    return complex(d * (math.cos(phase) + 1j * math.sin(phase)))


def wigner_D_matrix(k, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Full (2k+1)-dimensional rotation matrix, rows/cols ordered q = k..-k.

    With this ordering the rank-s matrix acts directly on spin states in the
    descending-m basis used everywhere in this package.  Unitary to roundoff.
    """
    tk = require_spin(k)
    n = tk + 1
    d = _small_d_matrix(tk, float(beta))
    tq_axis = tk - 2 * np.arange(n)
    left = np.exp(-0.5j * tq_axis * float(alpha))
    right = np.exp(-0.5j * tq_axis * float(gamma))
    out = left[:, None] * d * right[None, :]
    out.setflags(write=False)
    return out
