"""Overlap matrices of measurement pairs and their singular structure.

The overlap matrix of two projective measurements X, Y has entries
Tr(X_i Y_j).  For a pair of rank-1 measurements it is doubly stochastic,
and unistochastic when both bases are related by a unitary.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatchError, InvalidStateError
from .qmath import ProjectiveMeasurement

_DS_TOL = 1e-10


class OverlapMatrix:
    """A nonnegative overlap matrix with cached singular values.

    Attributes:
        matrix: nonnegative float array of shape (n_x, n_y).
        singular_values: descending singular values.
        source: short description of how the matrix was built, e.g.
            "mub(3)", "rotation_2d(0.5236)", "from_unitary".
    """

    def __init__(self, matrix, source: str = "from_projectors"):
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2:
            raise DimensionMismatchError(f"expected a matrix, got shape {m.shape}")
        if m.min() < -1e-12:
            raise InvalidStateError(f"overlap entry {m.min()!r} below -1e-12")
        self.matrix = np.clip(m, 0.0, None)
        self.matrix.setflags(write=False)
        self.singular_values = np.linalg.svd(self.matrix, compute_uv=False)
        self.source = source

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def dim(self) -> int:
        """Row count; equals the dimension for square rank-1 overlaps."""
        return self.matrix.shape[0]

    @property
    def sigma2(self) -> float:
        """Second largest singular value (0.0 for 1x1 matrices).

        Values below 1e-12 are snapped to zero: the leading singular
        value of a doubly stochastic matrix is 1, so anything under the
        SVD noise floor signals an exactly unbiased pair.
        """
        s = self.singular_values
        val = float(s[1]) if s.size > 1 else 0.0
        return 0.0 if val < 1e-12 else val

    @property
    def max_entry(self) -> float:
        return float(self.matrix.max())

    def is_doubly_stochastic(self, tol: float = _DS_TOL) -> bool:
        m = self.matrix
        if m.shape[0] != m.shape[1]:
            return False
        return bool(
            np.abs(m.sum(axis=0) - 1.0).max() <= tol
            and np.abs(m.sum(axis=1) - 1.0).max() <= tol
        )

    def __repr__(self):
        return f"OverlapMatrix(shape={self.shape}, source={self.source!r})"


def build_overlap(x: ProjectiveMeasurement, y: ProjectiveMeasurement) -> OverlapMatrix:
    """Overlap matrix Tr(X_i Y_j) of two measurements on the same system.

    For rank-1 pairs the result is checked to be doubly stochastic within
    1e-10.

    Raises:
        DimensionMismatchError: if the measurements act on different dimensions.
    """
    if x.dim != y.dim:
        raise DimensionMismatchError(f"dimensions differ: {x.dim} vs {y.dim}")
    c = np.einsum("iab,jba->ij", x.projectors, y.projectors).real
    out = OverlapMatrix(c, source="from_projectors")
    if (x.ranks() == 1).all() and (y.ranks() == 1).all():
        if not out.is_doubly_stochastic():
            raise InvalidStateError("rank-1 overlap is not doubly stochastic")
    return out


def from_unitary(u: np.ndarray) -> OverlapMatrix:
    """Unistochastic overlap |u_ij|^2 of a change-of-basis unitary."""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {u.shape}")
    if np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() > 1e-10:
        raise InvalidStateError("matrix is not unitary within 1e-10")
    return OverlapMatrix(np.abs(u) ** 2, source="from_unitary")


def rotation_overlap_2d(theta: float) -> OverlapMatrix:
    """Qubit overlap [[cos^2 t, sin^2 t], [sin^2 t, cos^2 t]].

    Args:
        theta: rotation angle in [0, pi/4]; 0 gives the identity and
            pi/4 the mutually unbiased pair.
    """
    if not 0.0 <= theta <= math.pi / 4 + 1e-12:
        raise ValueError(f"theta must lie in [0, pi/4], got {theta}")
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    return OverlapMatrix([[c2, s2], [s2, c2]], source=f"rotation_2d({theta:.6g})")


def mub_overlap(d: int) -> OverlapMatrix:
    """Overlap of a mutually unbiased pair: the constant matrix 1/d."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return OverlapMatrix(np.full((d, d), 1.0 / d), source=f"mub({d})")


def identity_overlap(d: int) -> OverlapMatrix:
    """Overlap of a measurement with itself: the identity matrix."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return OverlapMatrix(np.eye(d), source=f"identity({d})")


def tensor_overlap(a: OverlapMatrix, b: OverlapMatrix) -> OverlapMatrix:
    """Kronecker product overlap of a product measurement pair."""
    return OverlapMatrix(np.kron(a.matrix, b.matrix), source="tensor")


def second_singular_value(c) -> float:
    """Second largest singular value of an overlap matrix or plain array."""
    if not isinstance(c, OverlapMatrix):
        c = OverlapMatrix(np.asarray(c, dtype=float))
    return c.sigma2


def to_text(c: OverlapMatrix) -> str:
    """Serialize as plain text: one row per line, entries separated by spaces."""
    lines = [" ".join(f"{v:.17g}" for v in row) for row in c.matrix]
    return "\n".join(lines) + "\n"


def from_text(text: str, source: str = "from_text") -> OverlapMatrix:
    """Parse the plain-text format written by :func:`to_text`.

    Blank lines and lines starting with '#' are ignored.
    """
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([float(tok) for tok in line.split()])
    if not rows:
        raise ValueError("no matrix rows found")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise DimensionMismatchError(f"ragged rows with lengths {sorted(widths)}")
    return OverlapMatrix(np.array(rows), source=source)
