"""r -> s operator norms of nonnegative matrices over the positive orthant.

For a doubly stochastic matrix C the norm ||C||_{r->s} admits closed
forms in several regimes (constant matrix, permutation matrix, s <= r,
and the r=1, s=inf corner).  Outside those regimes the norm is computed
by a multistart nonlinear power iteration with a line-search fallback.
Weighted entropic bounds use the exponents r = alpha/mu and
s = alpha/(alpha - lambda).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NormConsistencyError, SolverFailureError
from .overlap import OverlapMatrix
from .qmath import LogBase

_DS_TOL = 1e-8


@dataclass(frozen=True)
class WeightTriple:
    """Entropy weights (alpha, lambda, mu) with 0 <= lambda, mu <= alpha <= 1.

    Derived norm exponents: r = alpha/mu (infinite when mu = 0) and
    s = alpha/(alpha - lambda) (infinite when lambda = alpha).
    """

    alpha: float
    lam: float
    mu: float

    def __post_init__(self):
        a, l, m = self.alpha, self.lam, self.mu
        if not (0.0 <= l <= a <= 1.0 and 0.0 <= m <= a):
            raise ValueError(
                f"need 0 <= lambda, mu <= alpha <= 1, got alpha={a}, lambda={l}, mu={m}"
            )

    @property
    def r(self) -> float:
        return math.inf if self.mu == 0.0 else self.alpha / self.mu

    @property
    def s(self) -> float:
        return math.inf if self.lam == self.alpha else self.alpha / (self.alpha - self.lam)


@dataclass(frozen=True)
class SolverOptions:
    """Options for the multistart power iteration."""

    restarts: int = 64
    max_iterations: int = 10_000
    tolerance: float = 1e-11
    seed: int = 0


class NormMethod(str, enum.Enum):
    CLOSED_MUB = "closed_mub"
    CLOSED_IDENTITY = "closed_identity"
    CLOSED_S_LE_R = "closed_s_le_r"
    CLOSED_KMU = "closed_kmu"
    NUMERIC_MULTISTART = "numeric_multistart"


@dataclass(frozen=True)
class NormResult:
    """A computed r -> s norm.

    Attributes:
        value: the norm itself (base independent).
        log_value: logarithm of the value in the requested base.
        witness: maximizing nonnegative vector with unit r-norm.
        method: how the value was obtained.
        certified_bounds: (lower, upper) sandwich from the constant and
            permutation matrices; (0, inf) when no certificate applies.
    """

    value: float
    log_value: float
    witness: np.ndarray
    method: NormMethod
    certified_bounds: tuple


def _as_matrix(c) -> np.ndarray:
    m = c.matrix if isinstance(c, OverlapMatrix) else np.asarray(c, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    if m.min() < -1e-12:
        raise ValueError(f"matrix entry {m.min()!r} is negative beyond tolerance")
    return np.clip(m, 0.0, None)


def _exponents(r=None, s=None, w: WeightTriple | None = None):
    if w is not None:
        if r is not None or s is not None:
            raise ValueError("pass either (r, s) or w, not both")
        return w.r, w.s
    if r is None or s is None:
        raise ValueError("pass either (r, s) or w")
    r, s = float(r), float(s)
    if r < 1.0 or s < 1.0:
        raise ValueError(f"exponents must be >= 1, got r={r}, s={s}")
    return r, s


def _is_doubly_stochastic(m: np.ndarray, tol: float = _DS_TOL) -> bool:
    if m.shape[0] != m.shape[1]:
        return False
    return bool(
        np.abs(m.sum(axis=0) - 1.0).max() <= tol
        and np.abs(m.sum(axis=1) - 1.0).max() <= tol
    )


def _pnorm(x: np.ndarray, p: float, axis=0) -> np.ndarray:
    """p-norm of nonnegative data along ``axis``, stable for large p."""
    if math.isinf(p):
        return x.max(axis=axis)
    m = x.max(axis=axis)
    safe = np.where(m > 0.0, m, 1.0)
    scaled = x / np.expand_dims(safe, axis)
    return m * np.sum(scaled**p, axis=axis) ** (1.0 / p)


def _ratio(c: np.ndarray, v: np.ndarray, r: float, s: float) -> float:
    """Objective ||C v||_s / ||v||_r for a single vector."""
    return float(_pnorm(c @ v, s, axis=0) / _pnorm(v, r, axis=0))


def norm_mub(d: int, r=None, s=None, w: WeightTriple | None = None) -> float:
    """Closed-form norm d**(1/s - 1/r) of the constant overlap matrix."""
    r, s = _exponents(r, s, w)
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    inv_s = 0.0 if math.isinf(s) else 1.0 / s
    inv_r = 0.0 if math.isinf(r) else 1.0 / r
    return float(d) ** (inv_s - inv_r)


def norm_identity(d: int, r=None, s=None, w: WeightTriple | None = None) -> float:
    """Closed-form norm of the identity: d**(1/s - 1/r) if r >= s, else 1."""
    r, s = _exponents(r, s, w)
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return norm_mub(d, r, s) if r >= s else 1.0


def mu_star(sigma2: float) -> float:
    """Largest weight mu = lambda with conjectured equality: 1 / (1 + sigma2)."""
    if not 0.0 <= sigma2 <= 1.0:
        raise ValueError(f"sigma2 must lie in [0, 1], got {sigma2}")
    return 1.0 / (1.0 + sigma2)


def conjecture_region_contains(mu: float, lam: float, sigma2: float) -> bool:
    """Whether (mu, lambda) satisfies (1 - mu)(1 - lambda) >= mu lambda sigma2^2.

    In this region the norm at exponents r = 1/mu, s = 1/(1 - lambda) is
    conjectured to equal the constant-matrix value; for mu + lambda <= 1
    this is a theorem.  The cross-multiplied form stays finite at
    mu = 1 or lambda = 1, and mu = 0 or lambda = 0 is always inside.
    """
    if not (0.0 <= mu <= 1.0 and 0.0 <= lam <= 1.0):
        raise ValueError(f"weights must lie in [0, 1], got mu={mu}, lambda={lam}")
    if not 0.0 <= sigma2 <= 1.0:
        raise ValueError(f"sigma2 must lie in [0, 1], got {sigma2}")
    return (1.0 - mu) * (1.0 - lam) >= mu * lam * sigma2**2 - 1e-12


@lru_cache(maxsize=None)
def _complement_basis(d: int) -> np.ndarray:
    """Orthonormal basis (d x (d-1)) of the complement of the all-ones vector."""
    cols = np.column_stack([np.ones(d), np.eye(d)[:, : d - 1]])
    q, _ = np.linalg.qr(cols)
    return q[:, 1:]


def hessian_spectrum_at_ones(c, mu: float, lam: float) -> np.ndarray:
    """Eigenvalues of (1-mu)(1-lam) I - mu lam C^T C on the complement of ones.

    The uniform vector is a critical point of the norm objective for any
    doubly stochastic C; these eigenvalues decide whether it is a local
    maximum (all nonnegative) or develops an unstable direction.

    Returns:
        Ascending eigenvalues, length d - 1.
    """
    m = _as_matrix(c)
    if not _is_doubly_stochastic(m):
        raise ValueError("matrix must be square doubly stochastic")
    d = m.shape[0]
    q = _complement_basis(d)
    h = (1.0 - mu) * (1.0 - lam) * np.eye(d) - mu * lam * (m.T @ m)
    return np.linalg.eigvalsh(q.T @ h @ q)


def scan_2d_objective(theta: float, mu: float, lam: float, grid: int):
    """Scan the qubit norm objective along x = (1, z), z in [0, 1].

    For the rotation overlap at angle ``theta`` the full maximization
    reduces to one variable; by symmetry z and 1/z give the same value,
    so the unit interval covers everything.

    Args:
        theta: rotation angle in (0, pi/4].
        mu, lam: weights with 0 < mu <= 1 and 0 <= lam < 1.
        grid: number of scan points, >= 2.

    Returns:
        Tuple of arrays (z, f(z)/f(1)); the last point is z = 1.
    """
    if not 0.0 < theta <= math.pi / 4 + 1e-12:
        raise ValueError(f"theta must lie in (0, pi/4], got {theta}")
    if not (0.0 < mu <= 1.0 and 0.0 <= lam < 1.0):
        raise ValueError(f"need 0 < mu <= 1 and 0 <= lambda < 1, got {mu}, {lam}")
    if grid < 2:
        raise ValueError(f"grid must have at least 2 points, got {grid}")
    r, s = 1.0 / mu, 1.0 / (1.0 - lam)
    t2 = math.tan(theta) ** 2
    z = np.linspace(0.0, 1.0, grid)
    a, b = 1.0 + z * t2, z + t2
    big = np.maximum(a, b)
    num = big * ((a / big) ** s + (b / big) ** s) ** (1.0 / s)
    den = (1.0 + z**r) ** (1.0 / r)
    f = math.cos(theta) ** 2 * num / den
    return z, f / f[-1]


def norm_closed_form(c, r=None, s=None, w: WeightTriple | None = None,
                     base: LogBase = LogBase.TWO) -> NormResult | None:
    """Closed-form norm of a doubly stochastic matrix, or None.

    Covered regimes: s <= r (any doubly stochastic matrix), the
    r = 1, s = inf corner (largest entry), the constant matrix, and
    permutation matrices.  Returns None otherwise, or when the matrix is
    not doubly stochastic within 1e-8.
    """
    r, s = _exponents(r, s, w)
    m = _as_matrix(c)
    if not _is_doubly_stochastic(m):
        return None
    d = m.shape[0]
    if s <= r:
        value = norm_mub(d, r, s)
        witness = _unit_r(np.ones(d), r)
        return _result(value, witness, NormMethod.CLOSED_S_LE_R, d, r, s, base)
    if r == 1.0 and math.isinf(s):
        flat = int(np.argmax(m))
        j = flat % d
        witness = np.zeros(d)
        witness[j] = 1.0
        return _result(float(m.max()), witness, NormMethod.CLOSED_KMU, d, r, s, base)
    if np.abs(m - 1.0 / d).max() <= 1e-12:
        return _result(norm_mub(d, r, s), _unit_r(np.ones(d), r),
                       NormMethod.CLOSED_MUB, d, r, s, base)
    if np.abs(m - np.rint(m)).max() <= 1e-12:
        value = norm_identity(d, r, s)
        witness = _unit_r(np.ones(d), r) if r >= s else np.eye(d)[0]
        return _result(value, witness, NormMethod.CLOSED_IDENTITY, d, r, s, base)
    return None


def _unit_r(v: np.ndarray, r: float) -> np.ndarray:
    return v / _pnorm(v, r, axis=0)


def _result(value, witness, method, d, r, s, base) -> NormResult:
    bounds = (norm_mub(d, r, s), norm_identity(d, r, s))
    log_value = base.log(value) if value > 0.0 else -math.inf
    return NormResult(float(value), float(log_value), witness, method, bounds)


def _line_search(c, a, b, r, s, iters=70):
    """Golden-section maximization of the objective on the segment [a, b]."""
    phi = (math.sqrt(5.0) - 1.0) / 2.0

    def g(t):
        return _ratio(c, (1.0 - t) * a + t * b, r, s)

    lo, hi = 0.0, 1.0
    t1, t2 = hi - phi * (hi - lo), lo + phi * (hi - lo)
    g1, g2 = g(t1), g(t2)
    for _ in range(iters):
        if g1 < g2:
            lo, t1, g1 = t1, t2, g2
            t2 = lo + phi * (hi - lo)
            g2 = g(t2)
        else:
            hi, t2, g2 = t2, t1, g1
            t1 = hi - phi * (hi - lo)
            g1 = g(t1)
    cands = [(g(0.0), 0.0), (g1, t1), (g2, t2), (g(1.0), 1.0)]
    gb, tb = max(cands, key=lambda p: p[0])
    v = (1.0 - tb) * a + tb * b
    return _unit_r(v, r), gb


def _multistart_ascent(m, r, s, opts):
    """Vectorized power iteration over a bank of starts; returns best point."""
    n = m.shape[1]
    rng = np.random.default_rng(opts.seed)
    starts = [np.ones((n, 1)), np.eye(n)]
    if opts.restarts > 0:
        starts.append(rng.standard_exponential((n, opts.restarts)))
    x = np.concatenate(starts, axis=1)
    x = x / _pnorm(x, r, axis=0)
    k = x.shape[1]
    mt = m.T
    f = _pnorm(m @ x, s, axis=0)
    best_f, best_x = f.copy(), x.copy()
    converged = np.zeros(k, dtype=bool)
    stall, last_best = 0, best_f.max()
    for _ in range(opts.max_iterations):
        y = m @ x
        ymax = y.max(axis=0)
        y = y / np.where(ymax > 0.0, ymax, 1.0)
        z = mt @ y ** (s - 1.0)
        zmax = z.max(axis=0)
        z = z / np.where(zmax > 0.0, zmax, 1.0)
        xn = z ** (1.0 / (r - 1.0))
        nrm = _pnorm(xn, r, axis=0)
        dead = nrm <= 0.0
        if dead.any():
            xn[:, dead] = x[:, dead]
            nrm = np.where(dead, 1.0, nrm)
        xn = xn / nrm
        fn = _pnorm(m @ xn, s, axis=0)
        dropped = fn < f - 1e-15
        for j in np.flatnonzero(dropped):
            xj, fj = _line_search(m, x[:, j], xn[:, j], r, s)
            xn[:, j], fn[j] = xj, fj
        rel = np.abs(fn - f) / np.maximum(fn, 1e-300)
        converged |= rel < opts.tolerance
        improved = fn > best_f
        best_f = np.where(improved, fn, best_f)
        best_x[:, improved] = xn[:, improved]
        x, f = xn, fn
        if converged.all():
            break
        top = best_f.max()
        if top <= last_best * (1.0 + 1e-13):
            stall += 1
            if stall >= 60:
                break
        else:
            stall = 0
        last_best = top
    else:
        if not converged.any():
            j = int(np.argmax(best_f))
            raise SolverFailureError(
                "no start of the power iteration converged",
                best_value=float(best_f[j]),
                best_point=best_x[:, j],
            )
    j = int(np.argmax(best_f))
    return best_x[:, j]


def norm_numeric(c, r=None, s=None, w: WeightTriple | None = None,
                 opts: SolverOptions | None = None,
                 base: LogBase = LogBase.TWO) -> NormResult:
    """Numerically maximize ||C x||_s / ||x||_r over the nonnegative orthant.

    Interior exponents use a multistart power iteration (starts: the
    all-ones vector, every standard basis vector, and ``opts.restarts``
    seeded random positive vectors) with a golden-section line search
    whenever a step would decrease the objective.  Boundary exponents
    reduce exactly: r = 1 picks the best column, s = inf the best row
    (via its Hoelder dual vector), r = inf the all-ones vector, and
    s = 1 the dual of the column sums.

    The result is checked against the closed form when one applies and,
    for doubly stochastic input, against the certified sandwich between
    the constant-matrix and identity values.

    Raises:
        SolverFailureError: if no start converges within max_iterations.
        NormConsistencyError: if a certified check fails.
    """
    r, s = _exponents(r, s, w)
    m = _as_matrix(c)
    opts = opts or SolverOptions()
    n = m.shape[1]
    if r == 1.0:
        col = _pnorm(m, s, axis=0)
        j = int(np.argmax(col))
        witness = np.zeros(n)
        witness[j] = 1.0
        value = float(col[j])
    elif math.isinf(r):
        witness = np.ones(n)
        value = float(_pnorm(m @ witness, s, axis=0))
    elif math.isinf(s):
        rstar = r / (r - 1.0)
        rows = _pnorm(m, rstar, axis=1)
        i = int(np.argmax(rows))
        witness = _unit_r(m[i] ** (rstar - 1.0), r) if rows[i] > 0.0 else np.eye(n)[0]
        value = _ratio(m, witness, r, s)
    elif s == 1.0:
        rstar = r / (r - 1.0)
        sums = m.sum(axis=0)
        witness = _unit_r(sums ** (rstar - 1.0), r) if sums.max() > 0.0 else np.eye(n)[0]
        value = _ratio(m, witness, r, s)
    else:
        witness = _multistart_ascent(m, r, s, opts)
        value = _ratio(m, witness, r, s)

    if _is_doubly_stochastic(m):
        d = m.shape[0]
        lo, hi = norm_mub(d, r, s), norm_identity(d, r, s)
        if not (lo - 1e-9 <= value <= hi + 1e-9):
            raise NormConsistencyError(
                f"numeric norm {value!r} escapes certified bounds [{lo!r}, {hi!r}]"
            )
        closed = norm_closed_form(m, r, s, base=base)
        if closed is not None and abs(value - closed.value) > 1e-7 * max(1.0, closed.value):
            raise NormConsistencyError(
                f"numeric norm {value!r} disagrees with closed form {closed.value!r}"
            )
        bounds = (lo, hi)
    else:
        bounds = (0.0, math.inf)
    log_value = base.log(value) if value > 0.0 else -math.inf
    return NormResult(value, float(log_value), witness,
                      NormMethod.NUMERIC_MULTISTART, bounds)


def norm(c, w: WeightTriple, opts: SolverOptions | None = None,
         base: LogBase = LogBase.TWO) -> NormResult:
    """Norm at the weight triple's exponents: closed form if available, else numeric."""
    closed = norm_closed_form(c, w=w, base=base)
    if closed is not None:
        return closed
    return norm_numeric(c, w=w, opts=opts, base=base)


def feasible_weight_grid(sigma2: float, n: int = 21) -> list:
    """Lattice points (mu, lambda) in [0, 1]^2 inside the conjectured region."""
    if n < 2:
        raise ValueError(f"grid must have at least 2 points per axis, got {n}")
    axis = np.linspace(0.0, 1.0, n)
    return [
        (float(mu), float(lam))
        for mu in axis
        for lam in axis
        if conjecture_region_contains(float(mu), float(lam), sigma2)
    ]
