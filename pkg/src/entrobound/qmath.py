"""Entropies, density matrices, projective measurements and random ensembles.

All entropic quantities take a :class:`LogBase` argument and default to
base two, so entropies are reported in bits unless stated otherwise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .errors import (
    DimensionMismatchError,
    InvalidDistributionError,
    InvalidStateError,
)

_HERMITIAN_TOL = 1e-12
_TRACE_TOL = 1e-12
_EIG_TOL = 1e-10
_DIST_TOL = 1e-12


class LogBase(enum.Enum):
    """Logarithm base used for entropies and norm logarithms."""

    TWO = 2.0
    NATURAL = math.e

    @property
    def ln(self) -> float:
        """Natural logarithm of the base."""
        return math.log(self.value)

    def log(self, x):
        """Logarithm of ``x`` in this base."""
        return np.log(x) / self.ln

    def exp(self, x):
        """Inverse of :meth:`log`, i.e. ``base ** x``."""
        return np.exp(np.asarray(x, dtype=float) * self.ln)


@dataclass(frozen=True)
class DensityMatrix:
    """A validated quantum state.

    Args:
        matrix: square complex matrix, Hermitian within 1e-12, unit trace
            within 1e-12, eigenvalues above -1e-10.

    Raises:
        InvalidStateError: if any of the state invariants fails.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"expected a square matrix, got shape {m.shape}")
        if np.abs(m - m.conj().T).max() > _HERMITIAN_TOL:
            raise InvalidStateError("matrix is not Hermitian within 1e-12")
        tr = np.trace(m).real
        if abs(tr - 1.0) > _TRACE_TOL:
            raise InvalidStateError(f"trace is {tr!r}, not 1 within 1e-12")
        if np.linalg.eigvalsh(m).min() < -_EIG_TOL:
            raise InvalidStateError("matrix has an eigenvalue below -1e-10")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Real eigenvalues in ascending order, clipped to [0, 1]."""
        return np.clip(np.linalg.eigvalsh(self.matrix), 0.0, 1.0)


@dataclass(frozen=True)
class ProjectiveMeasurement:
    """A finite projective measurement on a d-dimensional system.

    Args:
        projectors: array of shape (n, d, d); Hermitian projectors summing
            to the identity within 1e-10.
        labels: optional outcome labels, defaults to "0", "1", ...
    """

    projectors: np.ndarray
    labels: tuple = field(default=None)

    def __post_init__(self):
        p = np.asarray(self.projectors, dtype=complex)
        if p.ndim != 3 or p.shape[1] != p.shape[2]:
            raise DimensionMismatchError(
                f"expected projectors of shape (n, d, d), got {p.shape}"
            )
        for k in range(p.shape[0]):
            pk = p[k]
            if np.abs(pk - pk.conj().T).max() > 1e-10:
                raise InvalidStateError(f"projector {k} is not Hermitian")
            if np.abs(pk @ pk - pk).max() > 1e-10:
                raise InvalidStateError(f"projector {k} is not idempotent")
        if np.abs(p.sum(axis=0) - np.eye(p.shape[1])).max() > 1e-10:
            raise InvalidStateError("projectors do not sum to the identity")
        object.__setattr__(self, "projectors", p)
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(str(k) for k in range(p.shape[0])))
        elif len(self.labels) != p.shape[0]:
            raise DimensionMismatchError("one label per projector required")

    @property
    def n_outcomes(self) -> int:
        return self.projectors.shape[0]

    @property
    def dim(self) -> int:
        return self.projectors.shape[1]

    def ranks(self) -> np.ndarray:
        """Projector ranks, i.e. rounded traces."""
        return np.rint(np.einsum("kii->k", self.projectors).real).astype(int)


def basis_measurement(d: int) -> ProjectiveMeasurement:
    """Computational (standard) basis measurement in dimension ``d``."""
    eye = np.eye(d, dtype=complex)
    return ProjectiveMeasurement(np.einsum("ki,kj->kij", eye, eye.conj()))


def measurement_from_unitary(u: np.ndarray) -> ProjectiveMeasurement:
    """Rank-1 measurement onto the columns of a unitary ``u``.

    Args:
        u: unitary matrix whose columns are the measured basis vectors.

    Raises:
        InvalidStateError: if ``u`` is not unitary within 1e-10.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {u.shape}")
    if np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() > 1e-10:
        raise InvalidStateError("matrix is not unitary within 1e-10")
    return ProjectiveMeasurement(np.einsum("ik,jk->kij", u, u.conj()))


def rotated_measurement_2d(theta: float) -> ProjectiveMeasurement:
    """Qubit basis rotated by ``theta``: {(cos t, sin t), (-sin t, cos t)}."""
    c, s = math.cos(theta), math.sin(theta)
    return measurement_from_unitary(np.array([[c, -s], [s, c]]))


def fourier_measurement(d: int) -> ProjectiveMeasurement:
    """Discrete-Fourier basis measurement, mutually unbiased with the standard one."""
    k = np.arange(d)
    u = np.exp(2j * np.pi * np.outer(k, k) / d) / math.sqrt(d)
    return measurement_from_unitary(u)


def tensor_measurement(a: ProjectiveMeasurement, b: ProjectiveMeasurement) -> ProjectiveMeasurement:
    """Product measurement with projectors P_i (x) Q_j, outcomes in row-major order."""
    proj = np.einsum("iab,jcd->ijacbd", a.projectors, b.projectors)
    n = a.n_outcomes * b.n_outcomes
    d = a.dim * b.dim
    labels = tuple(f"{la},{lb}" for la in a.labels for lb in b.labels)
    return ProjectiveMeasurement(proj.reshape(n, d, d), labels)


def partial_trace(rho: DensityMatrix, dims: tuple, keep: int) -> DensityMatrix:
    """Reduced state of a bipartite system.

    Args:
        rho: state on a system of dimension dims[0] * dims[1].
        dims: local dimensions (d_a, d_b).
        keep: 0 to keep the first factor, 1 the second.
    """
    da, db = dims
    if da * db != rho.dim:
        raise DimensionMismatchError(f"dims {dims} incompatible with {rho.dim}")
    t = rho.matrix.reshape(da, db, da, db)
    if keep == 0:
        return DensityMatrix(np.einsum("ikjk->ij", t))
    if keep == 1:
        return DensityMatrix(np.einsum("kikj->ij", t))
    raise ValueError(f"keep must be 0 or 1, got {keep}")


def _check_distribution(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise InvalidDistributionError(f"expected a vector, got shape {p.shape}")
    if p.min() < -_DIST_TOL:
        raise InvalidDistributionError(f"negative entry {p.min()!r} beyond tolerance")
    if abs(p.sum() - 1.0) > 1e-10:
        raise InvalidDistributionError(f"entries sum to {p.sum()!r}, not 1")
    return np.clip(p, 0.0, None)


def shannon_entropy(p, base: LogBase = LogBase.TWO) -> float:
    """Shannon entropy of a probability vector.

    Args:
        p: probability vector; entries >= -1e-12 (tiny negatives are clipped)
            and summing to 1.
        base: logarithm base, default base two.

    Returns:
        Entropy in units of the chosen base; zero terms contribute zero.
    """
    p = _check_distribution(p)
    pos = p[p > 0.0]
    return float(-(pos * np.log(pos)).sum() / base.ln)


def von_neumann_entropy(rho: DensityMatrix, base: LogBase = LogBase.TWO) -> float:
    """Von Neumann entropy of a density matrix via its eigenvalues."""
    w = rho.eigenvalues()
    pos = w[w > 0.0]
    return float(-(pos * np.log(pos)).sum() / base.ln)


def measurement_distribution(rho: DensityMatrix, meas: ProjectiveMeasurement) -> np.ndarray:
    """Outcome distribution p_k = Tr(rho P_k) of a projective measurement.

    Tiny negative probabilities (above -1e-10) are clipped to zero; the
    vector is not rescaled otherwise.

    Raises:
        DimensionMismatchError: if state and measurement dimensions differ.
    """
    if rho.dim != meas.dim:
        raise DimensionMismatchError(
            f"state dimension {rho.dim} != measurement dimension {meas.dim}"
        )
    p = np.einsum("kij,ji->k", meas.projectors, rho.matrix).real
    if p.min() < -_EIG_TOL:
        raise InvalidDistributionError(f"probability {p.min()!r} below -1e-10")
    return np.clip(p, 0.0, None)


def haar_random_unitary(d: int, seed) -> np.ndarray:
    """Haar-distributed random unitary via phase-corrected QR of a Ginibre matrix.

    Args:
        d: dimension, >= 1.
        seed: integer seed or a numpy Generator.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_density_matrix(d: int, seed) -> DensityMatrix:
    """Hilbert-Schmidt distributed random state, G G^dag normalized."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def gibbs_gap(rho: DensityMatrix, lind: np.ndarray, base: LogBase = LogBase.TWO) -> float:
    """Free-energy style gap Tr(rho L) - [S(rho) - log Tr(base^-L)].

    The gap is nonnegative up to numerical noise and vanishes exactly for
    the Gibbs state rho = base^-L / Tr(base^-L).

    Args:
        rho: density matrix.
        lind: Hermitian operator L in the same dimension.
        base: logarithm base; the matrix exponential uses the same base.

    Raises:
        InvalidStateError: if ``lind`` is not Hermitian within 1e-10.
        DimensionMismatchError: on dimension mismatch.
    """
    lind = np.asarray(lind, dtype=complex)
    if lind.shape != rho.matrix.shape:
        raise DimensionMismatchError(
            f"operator shape {lind.shape} != state shape {rho.matrix.shape}"
        )
    if np.abs(lind - lind.conj().T).max() > 1e-10:
        raise InvalidStateError("operator is not Hermitian within 1e-10")
    energy = float(np.einsum("ij,ji->", rho.matrix, lind).real)
    w = np.linalg.eigvalsh(lind)
    log_z = float(logsumexp(-w * base.ln)) / base.ln
    return energy - (von_neumann_entropy(rho, base) - log_z)


def gibbs_state(lind: np.ndarray, base: LogBase = LogBase.TWO) -> DensityMatrix:
    """Gibbs state base^-L / Tr(base^-L) of a Hermitian operator."""
    lind = np.asarray(lind, dtype=complex)
    w, v = np.linalg.eigh(lind)
    weights = np.exp(-(w - w.min()) * base.ln)
    weights /= weights.sum()
    return DensityMatrix((v * weights) @ v.conj().T)
