"""Irreducible spherical tensor operator matrices and operator expansions.

All operator matrices live in the |s m> basis with rows/columns ordered by
descending projection, m = s, s-1, ..., -s.  Every module in this package
shares that ordering.  The rank-k component-q tensor has matrix elements
sqrt(2k+1) * <s m; k q | s m'> on the single band m' = m + q, so tau^0_0 is
the identity and every higher rank is traceless.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .angular import clebsch_gordan, require_spin
from .errors import DomainError

__all__ = [
    "tau_matrix",
    "operator_components",
    "operator_from_components",
    "spin_operators",
]


@lru_cache(maxsize=50_000)
def _tau_cached(ts: int, k: int, q: int) -> np.ndarray:
    n = ts + 1
    out = np.zeros((n, n), dtype=complex)
    scale = math.sqrt(2.0 * k + 1.0)
    s = ts / 2.0
    for i in range(n):
        tm = ts - 2 * i  # column index i holds m = s - i
        tmp = tm + 2 * q
        if abs(tmp) > ts:
            continue
        ip = (ts - tmp) // 2
        out[ip, i] = scale * clebsch_gordan(s, k, s, tm / 2.0, q, tmp / 2.0)
    out.setflags(write=False)
    return out


def tau_matrix(s, k: int, q: int) -> np.ndarray:
    """Matrix of the rank-k, component-q tensor operator on the spin-s space.

    Returns a read-only (2s+1) x (2s+1) complex array (entries are real in
    this phase convention).
    """
    ts = require_spin(s)
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise DomainError(f"rank k must be an integer, got {k!r}")
    if not isinstance(q, (int, np.integer)):
        raise DomainError(f"component q must be an integer, got {q!r}")
    if k < 0 or k > ts:
        raise DomainError(f"rank k={k} outside 0..2s={ts}")
    if abs(q) > k:
        raise DomainError(f"component q={q} outside -k..k for k={k}")
    return _tau_cached(ts, int(k), int(q))


def operator_components(a: np.ndarray) -> dict[tuple[int, int], complex]:
    """Spherical components a^k_q = Tr(A tau^k_q) of a square operator.

    The spin is inferred from the dimension (2s+1).  Together with
    operator_from_components this is an exact resolution of A.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"operator must be a square matrix, got shape {a.shape}")
    ts = a.shape[0] - 1
    s = ts / 2.0
    comps: dict[tuple[int, int], complex] = {}
    for k in range(ts + 1):
        for q in range(k, -k - 1, -1):
            tau = tau_matrix(s, k, q)
            comps[(k, q)] = complex(np.einsum("ab,ba->", a, tau))
    return comps


def operator_from_components(s, comps: dict[tuple[int, int], complex]) -> np.ndarray:
    """Reassemble A = (1/(2s+1)) sum_kq tau^k_q^dag a^k_q from its components.

    The 1/(2s+1) matches the tensor orthonormality Tr(tau tau^dag) = 2s+1.
    """
    ts = require_spin(s)
    n = ts + 1
    out = np.zeros((n, n), dtype=complex)
    for (k, q), value in comps.items():
        out += tau_matrix(s, k, q).conj().T * value
    return out / n


def spin_operators(s) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cartesian spin matrices (Sx, Sy, Sz) built from the rank-1 tensors.

    Sx = sqrt(s(s+1)/6) (tau^1_{-1} - tau^1_{1}),
    Sy = i sqrt(s(s+1)/6) (tau^1_{-1} + tau^1_{1}),
    Sz = sqrt(s(s+1)/3) tau^1_0.

    Hermitian, satisfy [Sx, Sy] = i Sz cyclically and Sx^2+Sy^2+Sz^2 =
    s(s+1) I.  For s = 0 the three matrices are 1x1 zeros.
    """
    ts = require_spin(s)
    if ts == 0:
        zero = np.zeros((1, 1), dtype=complex)
        return zero, zero.copy(), zero.copy()
    casimir = (ts / 2.0) * (ts / 2.0 + 1.0)
    t_m1 = tau_matrix(s, 1, -1)
    t_p1 = tau_matrix(s, 1, 1)
    t_0 = tau_matrix(s, 1, 0)
    sx = math.sqrt(casimir / 6.0) * (t_m1 - t_p1)
    sy = 1j * math.sqrt(casimir / 6.0) * (t_m1 + t_p1)
    sz = math.sqrt(casimir / 3.0) * t_0
    return sx, sy, sz
