"""Pointwise Cheeger deformation of a G-invariant metric.

A chart is the linear data at one point p of a Riemannian G-manifold: the
metric h on T_pM, the Killing fields X* of a basis of the Lie algebra, and a
callback giving sectional curvatures of h. From it we build the splitting
T_pM = V + H into orbit and horizontal directions, the orbit tensor P, the
comparison operator C_t with h_t(v, w) = h(C_t v, w), and the lower bound on
the curvature of h_t coming from the horizontal lift plane in
(M x G, h + Q/t).

Vectors of T_pM are coordinate vectors of length M (dimension of M); Lie
algebra elements are coordinate vectors of length D.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

DEFAULT_TOL = 1e-10
SecFn = Callable[[np.ndarray, np.ndarray], float]


def _symmetric_pd(mat: np.ndarray, name: str, tol: float) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    if not np.allclose(mat, mat.T, atol=tol * max(1.0, np.abs(mat).max(initial=0.0)), rtol=0):
        raise ValueError(f"{name} is not symmetric")
    mat = 0.5 * (mat + mat.T)
    if mat.shape[0] and np.linalg.eigvalsh(mat)[0] <= tol:
        raise ValueError(f"{name} is not positive definite")
    return mat


# --------------------------------------------------------------------------
# Lie algebras
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class LieAlgebraData:
    """Structure constants ``c[i, j, k]`` (so [e_i, e_j] = sum_k c[i,j,k] e_k) and a biinvariant Q."""

    structure: np.ndarray
    Q: np.ndarray
    name: str = ""
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        c = np.asarray(self.structure, dtype=float)
        D = c.shape[0] if c.ndim == 3 else -1
        if c.ndim != 3 or c.shape != (D, D, D):
            raise ValueError("structure constants must have shape (D, D, D)")
        Q = _symmetric_pd(self.Q, "Q", self.tol)
        if Q.shape != (D, D):
            raise ValueError(f"Q must be {D} x {D}")
        if np.abs(c + c.transpose(1, 0, 2)).max(initial=0.0) > self.tol:
            raise ValueError("structure constants are not antisymmetric in i, j")
        # [[e_i, e_j], e_k] + cyclic
        jac = (np.einsum("ijl,lkm->ijkm", c, c) + np.einsum("jkl,lim->ijkm", c, c)
               + np.einsum("kil,ljm->ijkm", c, c))
        if np.abs(jac).max(initial=0.0) > self.tol:
            raise ValueError("Jacobi identity fails")
        # Q([e_i, e_j], e_k) + Q(e_j, [e_i, e_k])
        a = np.einsum("ijl,lk->ijk", c, Q)
        if np.abs(a + a.transpose(0, 2, 1)).max(initial=0.0) > self.tol:
            raise ValueError("Q is not ad-invariant")
        object.__setattr__(self, "structure", c)
        object.__setattr__(self, "Q", Q)

    @property
    def dimension(self) -> int:
        return self.structure.shape[0]

    def bracket(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", X, Y, self.structure)

    def inner(self, X: np.ndarray, Y: np.ndarray) -> float:
        return float(X @ self.Q @ Y)

    def is_abelian(self) -> bool:
        return bool(np.abs(self.structure).max(initial=0.0) <= self.tol)

    @classmethod
    def abelian(cls, dim: int, Q: np.ndarray | None = None) -> LieAlgebraData:
        Q = np.eye(dim) if Q is None else Q
        return cls(np.zeros((dim, dim, dim)), Q, name=f"R^{dim}")

    @classmethod
    def so(cls, n: int) -> LieAlgebraData:
        """so(n) on the basis E_ab (a < b), with Q(X, Y) = -tr(XY)/2 (so Q = I)."""
        basis = so_basis(n)
        D = len(basis)
        c = np.zeros((D, D, D))
        for i, Ei in enumerate(basis):
            for j, Ej in enumerate(basis):
                c[i, j] = skew_coordinates(Ei @ Ej - Ej @ Ei)
        return cls(c, np.eye(D), name=f"so({n})")

    @classmethod
    def u1(cls, q: float = 1.0) -> LieAlgebraData:
        return cls(np.zeros((1, 1, 1)), np.array([[q]]), name="u(1)")

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "structure_constants": self.structure.tolist(),
                "Q": self.Q.tolist(), "name": self.name}


def so_basis(n: int) -> list[np.ndarray]:
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            E = np.zeros((n, n))
            E[a, b], E[b, a] = 1.0, -1.0
            out.append(E)
    return out


def skew_coordinates(M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    return np.array([M[a, b] for a in range(n) for b in range(a + 1, n)])


# --------------------------------------------------------------------------
# charts and splitting
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class ActionChart:
    """Linear data of a G-action at one point p."""

    h: np.ndarray
    killing: np.ndarray
    algebra: LieAlgebraData
    sec_h: Optional[SecFn] = field(default=None, compare=False)
    label: str = ""
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        h = _symmetric_pd(self.h, "h", self.tol)
        K = np.asarray(self.killing, dtype=float)
        if K.ndim != 2 or K.shape != (h.shape[0], self.algebra.dimension):
            raise ValueError(f"killing must be {h.shape[0]} x {self.algebra.dimension}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "killing", K)

    @property
    def dimension(self) -> int:
        return self.h.shape[0]

    def sectional(self, v: np.ndarray, w: np.ndarray) -> float:
        if self.sec_h is None:
            raise ValueError(f"chart {self.label!r} supplies no sectional curvature callback")
        return float(self.sec_h(v, w))


@dataclass(frozen=True)
class OrbitSplitting:
    """Bases of V_p, H_p (h-orthonormal) and m_p, g_p (Q-orthonormal), as columns."""

    vertical: np.ndarray
    horizontal: np.ndarray
    complement: np.ndarray
    isotropy: np.ndarray

    @property
    def orbit_dimension(self) -> int:
        return self.complement.shape[1]


def _h_orthonormalize(cols: np.ndarray, h: np.ndarray) -> np.ndarray:
    if cols.shape[1] == 0:
        return cols
    R = np.linalg.cholesky(cols.T @ h @ cols)
    return np.linalg.solve(R, cols.T).T


def orbit_splitting(chart: ActionChart) -> OrbitSplitting:
    tol = chart.tol
    M, D = chart.killing.shape
    L = np.linalg.cholesky(chart.algebra.Q)
    # Q-orthonormal coordinates y on g: X = L^-T y
    to_g = np.linalg.inv(L).T
    Kq = chart.killing @ to_g
    if D == 0:
        r, V = 0, np.zeros((0, 0))
    else:
        _, s, vh = np.linalg.svd(Kq)
        scale = max(1.0, s[0]) if s.size else 1.0
        r = int(np.sum(s > tol * scale))
        V = vh.T
    complement = to_g @ V[:, :r]
    isotropy = to_g @ V[:, r:]
    A = chart.killing @ complement
    gram = A.T @ chart.h @ A
    if r and np.linalg.eigvalsh(gram)[0] <= tol * max(1.0, np.abs(gram).max()):
        raise ValueError("killing map restricted to m_p is not injective within tolerance")
    vertical = _h_orthonormalize(A, chart.h)
    if r:
        _, s2, vh2 = np.linalg.svd(A.T @ chart.h)
        null = vh2[r:].T
    else:
        null = np.eye(M)
    horizontal = _h_orthonormalize(null, chart.h)
    return OrbitSplitting(vertical, horizontal, complement, isotropy)


@dataclass(frozen=True)
class OrbitTensor:
    """P_p on m_p, in the Q-orthonormal basis ``basis`` (D x r) of m_p."""

    basis: np.ndarray
    matrix: np.ndarray
    Q: np.ndarray

    def apply(self, X: np.ndarray) -> np.ndarray:
        """P applied to the m_p-component of X in g."""
        return self.basis @ (self.matrix @ (self.basis.T @ self.Q @ X))

    def as_operator(self) -> np.ndarray:
        """D x D matrix of P extended by zero on g_p."""
        return self.basis @ self.matrix @ self.basis.T @ self.Q


def compute_P(chart: ActionChart, splitting: OrbitSplitting | None = None) -> OrbitTensor:
    """Solve Q(P X, Y) = h(X*, Y*) on m_p."""
    split = splitting or orbit_splitting(chart)
    B = split.complement
    if B.shape[1] == 0:
        raise ValueError("m_p is trivial: the point is fixed by the whole group")
    A = chart.killing @ B
    P = A.T @ chart.h @ A
    P = 0.5 * (P + P.T)
    if np.linalg.eigvalsh(P)[0] <= chart.tol:
        raise ValueError("orbit Gram matrix is singular")
    return OrbitTensor(B, P, chart.algebra.Q)


# --------------------------------------------------------------------------
# deformed metric
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class DeformedMetric:
    chart: ActionChart
    t: float
    splitting: OrbitSplitting
    P: Optional[OrbitTensor]
    C: np.ndarray
    h_t: np.ndarray
    _coords: np.ndarray = field(repr=False)

    def metric(self, v: np.ndarray, w: np.ndarray) -> float:
        return float(v @ self.h_t @ w)

    def m_component(self, v: np.ndarray) -> np.ndarray:
        """v_m in g: the X in m_p with X* the vertical part of v."""
        if self.P is None:
            return np.zeros(self.chart.algebra.dimension)
        return self.P.basis @ (self._coords @ v)

    def lift(self, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Horizontal lift of C_t^-1 v in (M x G, h + Q/t): (v, -t P v_m)."""
        if self.P is None:
            return v, np.zeros(self.chart.algebra.dimension)
        return v, -self.t * self.P.apply(self.m_component(v))

    def inverse_C(self, v: np.ndarray) -> np.ndarray:
        return np.linalg.solve(self.C, v)


def deformed_metric(chart: ActionChart, t: float) -> DeformedMetric:
    t = float(t)
    if not t >= 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    split = orbit_splitting(chart)
    M = chart.dimension
    r = split.orbit_dimension
    if r == 0:
        return DeformedMetric(chart, t, split, None, np.eye(M), chart.h.copy(), np.zeros((0, M)))
    P = compute_P(chart, split)
    A = chart.killing @ P.basis
    # x-coordinates of the vertical part: P^-1 A^T h v
    coords = np.linalg.solve(P.matrix, A.T @ chart.h)
    shrink = np.linalg.inv(np.eye(r) + t * P.matrix) - np.eye(r)
    C = np.eye(M) + A @ shrink @ coords
    h_t = chart.h @ C
    h_t = 0.5 * (h_t + h_t.T)
    return DeformedMetric(chart, t, split, P, C, h_t, coords)


# --------------------------------------------------------------------------
# curvature of the lift plane
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class LiftPlaneCurvature:
    bound: float
    alpha: float
    beta: float
    sec_h: float
    sec_Q: Optional[float]
    bracket_norm2: float


def _wedge2(G: np.ndarray) -> float:
    return float(G[0, 0] * G[1, 1] - G[0, 1] * G[1, 0])


def lift_plane_decomposition(dm: DeformedMetric, v: np.ndarray, w: np.ndarray) -> LiftPlaneCurvature:
    chart, t = dm.chart, dm.t
    v, w = np.asarray(v, dtype=float), np.asarray(w, dtype=float)
    Gh = np.array([[v @ chart.h @ v, v @ chart.h @ w], [w @ chart.h @ v, w @ chart.h @ w]])
    vw2 = _wedge2(Gh)
    if vw2 <= chart.tol * max(1.0, Gh[0, 0] * Gh[1, 1]):
        raise ValueError("v and w are linearly dependent")
    sec = chart.sectional(v, w)
    Q = chart.algebra.Q
    PX = dm.P.apply(dm.m_component(v)) if dm.P is not None else np.zeros(chart.algebra.dimension)
    PY = dm.P.apply(dm.m_component(w)) if dm.P is not None else np.zeros(chart.algebra.dimension)
    GQ = np.array([[PX @ Q @ PX, PX @ Q @ PY], [PY @ Q @ PX, PY @ Q @ PY]])
    pq2 = _wedge2(GQ)
    det = _wedge2(Gh + t * GQ)
    br = chart.algebra.bracket(PX, PY)
    br2 = float(br @ Q @ br)
    if br2 <= (chart.tol ** 2) * GQ[0, 0] * GQ[1, 1]:
        br2 = 0.0
    degenerate = pq2 <= chart.tol * max(1e-300, GQ[0, 0] * GQ[1, 1]) or GQ[0, 0] * GQ[1, 1] == 0
    alpha = vw2 / det
    if degenerate:
        beta, secQ, br2 = 0.0, None, 0.0
    else:
        beta = t * t * pq2 / det
        secQ = 0.25 * br2 / pq2
    bound = (sec * vw2 + 0.25 * t ** 3 * br2) / det
    return LiftPlaneCurvature(bound, alpha, beta, sec, secQ, br2)


def lift_plane_curvature_bound(dm: DeformedMetric, v: np.ndarray, w: np.ndarray) -> float:
    """alpha(t) sec_h<v,w> + t beta(t) sec_Q<PX,PY>: a lower bound for sec_{h_t}<C_t^-1 v, C_t^-1 w>."""
    return lift_plane_decomposition(dm, v, w).bound


def noncommuting_pair(chart: ActionChart, trials: int = 200, seed: int = 0,
                      tol: float | None = None) -> tuple[np.ndarray, np.ndarray] | None:
    """X, Y in m_p with [PX, PY] != 0, from basis pairs and then random combinations."""
    tol = chart.tol if tol is None else tol
    split = orbit_splitting(chart)
    if split.orbit_dimension < 2:
        return None
    P = compute_P(chart, split)
    alg = chart.algebra

    def ok(X, Y) -> bool:
        PX, PY = P.apply(X), P.apply(Y)
        br = alg.bracket(PX, PY)
        nx, ny = np.sqrt(alg.inner(PX, PX)), np.sqrt(alg.inner(PY, PY))
        return np.sqrt(max(alg.inner(br, br), 0.0)) > tol * nx * ny

    B = split.complement
    r = B.shape[1]
    for i in range(r):
        for j in range(i + 1, r):
            if ok(B[:, i], B[:, j]):
                return B[:, i].copy(), B[:, j].copy()
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        X, Y = B @ rng.normal(size=r), B @ rng.normal(size=r)
        if ok(X, Y):
            return X, Y
    return None


# --------------------------------------------------------------------------
# scalar curvature estimate and t0 search
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class PlaneProfile:
    """t-independent data of a chart that determines its scal estimate for every t.

    The h-orthonormal basis made of the horizontal basis and the P-eigenvectors
    in V_p diagonalizes C_t simultaneously for all t. For the plane of basis
    vectors i, j the bound is
    (sec_ij + t^3/4 * bracket_ij) / ((1 + t p_i)(1 + t p_j)).
    """

    basis: np.ndarray
    p: np.ndarray
    sec: np.ndarray
    bracket: np.ndarray
    pairs: tuple[tuple[int, int], ...]

    def estimate(self, ts: np.ndarray | float) -> np.ndarray:
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        if not self.pairs:
            return np.zeros_like(ts)
        i, j = np.array(self.pairs).T
        num = self.sec[None, :] + 0.25 * ts[:, None] ** 3 * self.bracket[None, :]
        den = (1 + ts[:, None] * self.p[i][None, :]) * (1 + ts[:, None] * self.p[j][None, :])
        return np.mean(num / den, axis=1)


def plane_profile(chart: ActionChart) -> PlaneProfile:
    split = orbit_splitting(chart)
    M = chart.dimension
    cols, ps, PXs = [], [], []
    D = chart.algebra.dimension
    if split.orbit_dimension:
        P = compute_P(chart, split)
        evals, evecs = np.linalg.eigh(P.matrix)
        A = chart.killing @ P.basis
        for lam, x in zip(evals, evecs.T):
            cols.append(A @ x / np.sqrt(lam))
            ps.append(lam)
            # P v_m for v = A x / sqrt(lam)
            PXs.append(P.basis @ (x * np.sqrt(lam)))
    for k in range(split.horizontal.shape[1]):
        cols.append(split.horizontal[:, k])
        ps.append(0.0)
        PXs.append(np.zeros(D))
    basis = np.column_stack(cols) if cols else np.zeros((M, 0))
    pairs = tuple((i, j) for i in range(M) for j in range(i + 1, M))
    sec = np.array([chart.sectional(basis[:, i], basis[:, j]) for i, j in pairs])
    alg = chart.algebra
    brackets = []
    for i, j in pairs:
        br = alg.bracket(PXs[i], PXs[j])
        b2 = alg.inner(br, br)
        if b2 <= chart.tol ** 2 * alg.inner(PXs[i], PXs[i]) * alg.inner(PXs[j], PXs[j]):
            b2 = 0.0
        brackets.append(b2)
    return PlaneProfile(basis, np.array(ps), sec, np.array(brackets), pairs)


def scal_estimate(dm: DeformedMetric) -> float:
    """Average of the lift-plane bound over the planes of an h_t-orthonormal basis.

    Reference implementation through :func:`lift_plane_curvature_bound`; the
    t0 search uses the equivalent closed form of :class:`PlaneProfile`.
    """
    prof = plane_profile(dm.chart)
    M = dm.chart.dimension
    if M < 2:
        return 0.0
    vals = [lift_plane_curvature_bound(dm, prof.basis[:, i], prof.basis[:, j]) for i, j in prof.pairs]
    return float(np.mean(vals))


def t_grid(t_max: float, steps: int = 64, t_min: float = 1e-3) -> np.ndarray:
    """0 followed by a geometric grid from t_min to t_max with ``steps`` points per decade."""
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    if steps < 1:
        raise ValueError("steps must be positive")
    if t_max <= t_min:
        return np.array([0.0, float(t_max)])
    count = int(np.ceil(steps * np.log10(t_max / t_min))) + 1
    return np.concatenate([[0.0], np.geomspace(t_min, t_max, count)])


@dataclass(frozen=True)
class T0Sweep:
    grid: np.ndarray
    estimates: np.ndarray  # charts x grid
    t0: Optional[float]

    @property
    def certified(self) -> bool:
        return self.t0 is not None

    def min_estimate(self) -> np.ndarray:
        return self.estimates.min(axis=0)


def t0_sweep(charts: Sequence[ActionChart], t_max: float, steps: int = 64, t_min: float = 1e-3) -> T0Sweep:
    if not charts:
        raise ValueError("find_t0 needs at least one chart")
    grid = t_grid(t_max, steps, t_min)
    est = np.vstack([plane_profile(c).estimate(grid) for c in charts])
    ok = np.all(est > 0, axis=0)
    bad = np.nonzero(~ok)[0]
    if bad.size == 0:
        t0 = float(grid[0])
    elif bad[-1] == grid.size - 1:
        t0 = None
    else:
        t0 = float(grid[bad[-1] + 1])
    return T0Sweep(grid, est, t0)


def find_t0(charts: Sequence[ActionChart], t_max: float, steps: int = 64, t_min: float = 1e-3) -> float | None:
    """Smallest grid t0 with every chart's scal estimate > 0 on [t0, t_max], or None."""
    return t0_sweep(charts, t_max, steps, t_min).t0
