"""Multipole (statistical tensor) decomposition of spin density matrices.

A spin-s state resolves as rho = (1/(2s+1)) sum_kq tau^k_q^dag t^k_q with
t^k_q = Tr(rho tau^k_q); a bipartite state carries the coupled coefficients
t^{k1 k2}_{q1 q2} = Tr(rho12 tau^{k1}_{q1} x tau^{k2}_{q2}).  The product
basis orders the row index (m1, m2) lexicographically with both projections
descending (m1 outer), matching the single-system convention.

All containers are immutable after construction and validate their
invariants on ingestion, naming the violated invariant in the error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .angular import HalfInteger, require_spin, wigner_D_matrix
from .errors import DomainError, ValidationError
from .tensor_ops import tau_matrix

__all__ = [
    "DensityMatrix",
    "BipartiteDensityMatrix",
    "FanoTensorSet",
    "CoupledFanoTensorSet",
    "decompose",
    "reconstruct",
    "decompose_bipartite",
    "reconstruct_bipartite",
    "reduce",
    "is_product",
    "rotate_tensors",
    "singlet_density",
    "singlet_tensors",
]

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
# file-ingested matrices carry rounding; a hard zero floor would reject them
EIGENVALUE_FLOOR = -1e-10
TENSOR_TOL = 1e-12


def _validate_state_matrix(matrix: np.ndarray, dim: int, what: str) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{what}: matrix must be square, got shape {m.shape}")
    if m.shape[0] != dim:
        raise ValidationError(
            f"{what}: dimension mismatch, expected {dim} rows for the declared "
            f"spin, got {m.shape[0]}"
        )
    herm_defect = float(np.max(np.abs(m - m.conj().T)))
    if herm_defect > HERMITICITY_TOL:
        raise ValidationError(
            f"{what}: hermiticity violated (max |M - M^dag| = {herm_defect:.3e})"
        )
    trace = complex(np.trace(m))
    if abs(trace - 1.0) > TRACE_TOL:
        raise ValidationError(
            f"{what}: unit trace violated (measured trace = {trace.real:.15g}"
            f"{trace.imag:+.3e}j)"
        )
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))))
    if min_eig < EIGENVALUE_FLOOR:
        raise ValidationError(
            f"{what}: positivity violated (smallest eigenvalue = {min_eig:.3e})"
        )
    m = m.copy()
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class DensityMatrix:
    """Spin-s density matrix in the descending-m basis."""

    s: HalfInteger
    matrix: np.ndarray

    def __post_init__(self):
        s = HalfInteger.from_value(self.s)
        ts = require_spin(s)
        object.__setattr__(self, "s", s)
        object.__setattr__(
            self, "matrix", _validate_state_matrix(self.matrix, ts + 1, "density matrix")
        )

    @property
    def dim(self) -> int:
        return self.s.twice_value + 1


@dataclass(frozen=True)
class BipartiteDensityMatrix:
    """Two-spin density matrix; row index (m1, m2) lexicographic, m1 outer."""

    s1: HalfInteger
    s2: HalfInteger
    matrix: np.ndarray

    def __post_init__(self):
        s1 = HalfInteger.from_value(self.s1)
        s2 = HalfInteger.from_value(self.s2)
        dim = (require_spin(s1) + 1) * (require_spin(s2) + 1)
        object.__setattr__(self, "s1", s1)
        object.__setattr__(self, "s2", s2)
        object.__setattr__(
            self,
            "matrix",
            _validate_state_matrix(self.matrix, dim, "bipartite density matrix"),
        )

    @property
    def dim1(self) -> int:
        return self.s1.twice_value + 1

    @property
    def dim2(self) -> int:
        return self.s2.twice_value + 1


def _labels(ts: int):
    for k in range(ts + 1):
        for q in range(k, -k - 1, -1):
            yield k, q


@dataclass(frozen=True)
class FanoTensorSet:
    """Complete multipole coefficients t^k_q of a single spin-s state.

    Invariants: t^0_0 = 1 and conj(t^k_q) = (-1)^q t^k_{-q}, both to 1e-12.
    """

    s: HalfInteger
    values: dict = field(repr=False)

    def __post_init__(self):
        s = HalfInteger.from_value(self.s)
        ts = require_spin(s)
        object.__setattr__(self, "s", s)
        vals = {}
        for key, v in dict(self.values).items():
            k, q = key
            vals[(int(k), int(q))] = complex(v)
        expected = set(_labels(ts))
        missing = sorted(expected - set(vals))
        if missing:
            raise ValidationError(f"tensor set incomplete, missing labels {missing}")
        extra = sorted(set(vals) - expected)
        if extra:
            raise ValidationError(f"tensor set has out-of-range labels {extra}")
        if abs(vals[(0, 0)] - 1.0) > TENSOR_TOL:
            raise ValidationError(
                f"normalization violated: t^0_0 = {vals[(0, 0)]:.15g}, expected 1"
            )
        for (k, q), v in vals.items():
            mirror = vals[(k, -q)]
            defect = abs(np.conj(v) - (-1.0) ** q * mirror)
            if defect > TENSOR_TOL:
                raise ValidationError(
                    f"hermiticity violated at (k={k}, q={q}): "
                    f"|conj(t) - (-1)^q t_(-q)| = {defect:.3e}"
                )
        object.__setattr__(self, "values", MappingProxyType(vals))

    def value(self, k: int, q: int) -> complex:
        return self.values[(k, q)]

    def as_array(self) -> np.ndarray:
        """Dense layout [k, 2s + q], zero where |q| > k."""
        ts = self.s.twice_value
        out = np.zeros((ts + 1, 2 * ts + 1), dtype=complex)
        for (k, q), v in self.values.items():
            out[k, ts + q] = v
        return out


def _coupled_labels(ts1: int, ts2: int):
    for k1, q1 in _labels(ts1):
        for k2, q2 in _labels(ts2):
            yield k1, q1, k2, q2


@dataclass(frozen=True)
class CoupledFanoTensorSet:
    """Complete coupled coefficients t^{k1 k2}_{q1 q2} of a two-spin state."""

    s1: HalfInteger
    s2: HalfInteger
    values: dict = field(repr=False)

    def __post_init__(self):
        s1 = HalfInteger.from_value(self.s1)
        s2 = HalfInteger.from_value(self.s2)
        ts1 = require_spin(s1)
        ts2 = require_spin(s2)
        object.__setattr__(self, "s1", s1)
        object.__setattr__(self, "s2", s2)
        vals = {}
        for key, v in dict(self.values).items():
            k1, q1, k2, q2 = key
            vals[(int(k1), int(q1), int(k2), int(q2))] = complex(v)
        expected = set(_coupled_labels(ts1, ts2))
        missing = sorted(expected - set(vals))
        if missing:
            raise ValidationError(
                f"coupled tensor set incomplete, missing {len(missing)} labels, "
                f"first {missing[:4]}"
            )
        extra = sorted(set(vals) - expected)
        if extra:
            raise ValidationError(f"coupled tensor set has out-of-range labels {extra[:4]}")
        if abs(vals[(0, 0, 0, 0)] - 1.0) > TENSOR_TOL:
            raise ValidationError(
                f"normalization violated: t^00_00 = {vals[(0, 0, 0, 0)]:.15g}, expected 1"
            )
        for (k1, q1, k2, q2), v in vals.items():
            mirror = vals[(k1, -q1, k2, -q2)]
            defect = abs(np.conj(v) - (-1.0) ** (q1 + q2) * mirror)
            if defect > TENSOR_TOL:
                raise ValidationError(
                    f"conjugation symmetry violated at (k1={k1}, q1={q1}, "
                    f"k2={k2}, q2={q2}): defect {defect:.3e}"
                )
        object.__setattr__(self, "values", MappingProxyType(vals))

    def value(self, k1: int, q1: int, k2: int, q2: int) -> complex:
        return self.values[(k1, q1, k2, q2)]

    def as_array(self) -> np.ndarray:
        """Dense layout [k1, 2s1 + q1, k2, 2s2 + q2]."""
        ts1 = self.s1.twice_value
        ts2 = self.s2.twice_value
        out = np.zeros((ts1 + 1, 2 * ts1 + 1, ts2 + 1, 2 * ts2 + 1), dtype=complex)
        for (k1, q1, k2, q2), v in self.values.items():
            out[k1, ts1 + q1, k2, ts2 + q2] = v
        return out


def decompose(rho: DensityMatrix) -> FanoTensorSet:
    """Multipole coefficients t^k_q = Tr(rho tau^k_q)."""
    ts = rho.s.twice_value
    s = rho.s
    vals = {}
    for k, q in _labels(ts):
        tau = tau_matrix(s, k, q)
        vals[(k, q)] = complex(np.einsum("ab,ba->", rho.matrix, tau))
    return FanoTensorSet(s, vals)


def reconstruct(t: FanoTensorSet) -> DensityMatrix:
    """Invert decompose: rho = (1/(2s+1)) sum_kq tau^k_q^dag t^k_q."""
    ts = t.s.twice_value
    n = ts + 1
    out = np.zeros((n, n), dtype=complex)
    for (k, q), v in t.values.items():
        out += tau_matrix(t.s, k, q).conj().T * v
    return DensityMatrix(t.s, out / n)


def decompose_bipartite(rho12: BipartiteDensityMatrix) -> CoupledFanoTensorSet:
    """Coupled coefficients Tr(rho12 tau^{k1}_{q1} x tau^{k2}_{q2})."""
    ts1 = rho12.s1.twice_value
    ts2 = rho12.s2.twice_value
    n1, n2 = ts1 + 1, ts2 + 1
    mat4 = rho12.matrix.reshape(n1, n2, n1, n2)
    vals = {}
    for k1, q1 in _labels(ts1):
        a = tau_matrix(rho12.s1, k1, q1)
        partial = np.einsum("ijkl,ki->jl", mat4, a)
        for k2, q2 in _labels(ts2):
            b = tau_matrix(rho12.s2, k2, q2)
            vals[(k1, q1, k2, q2)] = complex(np.einsum("jl,lj->", partial, b))
    return CoupledFanoTensorSet(rho12.s1, rho12.s2, vals)


def reconstruct_bipartite(t12: CoupledFanoTensorSet) -> BipartiteDensityMatrix:
    """Invert decompose_bipartite:

    rho12 = (1/((2s1+1)(2s2+1))) sum conj(t^{k1 k2}_{q1 q2})
            (tau^{k1}_{q1} x tau^{k2}_{q2}).
    """
    ts1 = t12.s1.twice_value
    ts2 = t12.s2.twice_value
    n1, n2 = ts1 + 1, ts2 + 1
    out = np.zeros((n1 * n2, n1 * n2), dtype=complex)
    for k1, q1 in _labels(ts1):
        block = np.zeros((n2, n2), dtype=complex)
        for k2, q2 in _labels(ts2):
            block += np.conj(t12.values[(k1, q1, k2, q2)]) * tau_matrix(t12.s2, k2, q2)
        out += np.kron(tau_matrix(t12.s1, k1, q1), block)
    return BipartiteDensityMatrix(t12.s1, t12.s2, out / (n1 * n2))


def reduce(rho12: BipartiteDensityMatrix, which: int) -> DensityMatrix:
    """Partial trace onto subsystem 1 or 2."""
    if which not in (1, 2):
        raise DomainError(f"subsystem selector must be 1 or 2, got {which!r}")
    n1, n2 = rho12.dim1, rho12.dim2
    mat4 = rho12.matrix.reshape(n1, n2, n1, n2)
    if which == 1:
        return DensityMatrix(rho12.s1, np.einsum("ijkj->ik", mat4))
    return DensityMatrix(rho12.s2, np.einsum("ijil->jl", mat4))


def is_product(t12: CoupledFanoTensorSet, tol: float) -> bool:
    """Factorization test: every coupled coefficient equals the product of
    its marginals within tol.

    True certifies an uncorrelated product state; this is not a general
    separability test.
    """
    tol = float(tol)
    worst = 0.0
    for (k1, q1, k2, q2), v in t12.values.items():
        prod = t12.values[(k1, q1, 0, 0)] * t12.values[(0, 0, k2, q2)]
        worst = max(worst, abs(v - prod))
    return worst <= tol


def rotate_tensors(t: FanoTensorSet, alpha: float, beta: float, gamma: float) -> FanoTensorSet:
    """Coefficients of the actively rotated state R rho R^dag.

    Because R tau^k_q R^dag = sum_{q'} D^k_{q'q} tau^k_{q'}, the coefficients
    transform with the conjugate matrix: t'^k_q = sum_{q'} conj(D^k_{q q'})
    t^k_{q'}.  Matches decompose(R rho R^dag) to roundoff.
    """
    ts = t.s.twice_value
    vals = {(0, 0): complex(t.values[(0, 0)])}
    for k in range(1, ts + 1):
        d = wigner_D_matrix(k, alpha, beta, gamma)
        vec = np.array([t.values[(k, k - i)] for i in range(2 * k + 1)])
        rotated = np.conj(d) @ vec
        for j in range(2 * k + 1):
            vals[(k, k - j)] = complex(rotated[j])
    return FanoTensorSet(t.s, vals)


def singlet_density(s) -> BipartiteDensityMatrix:
    """Total-spin-zero state of two spin-s systems.

    Matrix elements <s m1'; s m2'| rho |s m1; s m2> =
    (-1)^(m1 - m1') / (2s+1) delta_{m1', -m2'} delta_{m1, -m2}.  Pure and
    rotationally invariant; s = 0 degenerates to the trivial 1x1 state.
    """
    ts = require_spin(s)
    n = ts + 1
    out = np.zeros((n * n, n * n), dtype=complex)
    for ip in range(n):
        jp = ts - ip  # m2' = -m1'
        for i in range(n):
            j = ts - i  # m2 = -m1
            sign = -1.0 if (ip - i) % 2 else 1.0
            out[ip * n + jp, i * n + j] = sign / n
    return BipartiteDensityMatrix(HalfInteger(ts), HalfInteger(ts), out)


def singlet_tensors(s) -> CoupledFanoTensorSet:
    """Closed-form coupled coefficients of the spin-s singlet:

    t^{k1 k2}_{q1 q2} = (-1)^(k1 + q1) delta_{k1 k2} delta_{q1, -q2}.
    """
    ts = require_spin(s)
    vals = {}
    for k1, q1, k2, q2 in _coupled_labels(ts, ts):
        if k1 == k2 and q1 == -q2:
            vals[(k1, q1, k2, q2)] = complex(-1.0 if (k1 + q1) % 2 else 1.0)
        else:
            vals[(k1, q1, k2, q2)] = 0.0j
    return CoupledFanoTensorSet(HalfInteger(ts), HalfInteger(ts), vals)
