"""Brieskorn polynomials, their links and Milnor fibres, and the symmetry groups.

Throughout, ``f(z) = z_1^2 + ... + z_n^2 + z_{n+1}^d`` on C^{n+1}. The link
Sigma_eps is ``{f = eps} ∩ S^{2n+1}`` and W_eps is ``{f = eps} ∩ D^{2n+2}``.
Two groups act: S^1 x O(n) on the singular fibre (circle by
``(w^d z_1, ..., w^d z_n, w^2 z_{n+1})``, O(n) on the first n coordinates),
and Z_2d x O(n) on every fibre. ``tau`` is the involution negating the first
n coordinates.

Points may be given with exact :class:`GaussianRational` coordinates, in which
case polynomial evaluation stays exact, or as plain complex numbers.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exact import GaussianRational, format_rational, parse_rational


# --------------------------------------------------------------------------
# data types
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class BrieskornData:
    n: int
    d: int
    epsilon: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "epsilon", parse_rational(self.epsilon))
        if not isinstance(self.n, int) or self.n < 3 or self.n % 2 == 0:
            raise ValueError(f"n must be an odd integer >= 3, got {self.n}")
        if not isinstance(self.d, int) or self.d < 1 or self.d % 2 == 0:
            raise ValueError(f"d must be an odd integer >= 1, got {self.d}")
        if not 0 <= self.epsilon < 1:
            raise ValueError(f"epsilon must satisfy 0 <= epsilon < 1, got {self.epsilon}")

    @property
    def link_dimension(self) -> int:
        return 2 * self.n - 1

    @property
    def variety_dimension(self) -> int:
        return 2 * self.n

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "epsilon": format_rational(self.epsilon)}

    @classmethod
    def from_json(cls, obj: dict) -> BrieskornData:
        return cls(int(obj["n"]), int(obj["d"]), parse_rational(obj.get("epsilon", "0")))


@dataclass(frozen=True)
class ComplexPoint:
    coordinates: tuple

    def __init__(self, coordinates: Sequence):
        object.__setattr__(self, "coordinates", tuple(coordinates))

    def __len__(self) -> int:
        return len(self.coordinates)

    def __iter__(self):
        return iter(self.coordinates)

    def __getitem__(self, i):
        return self.coordinates[i]

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (GaussianRational, int, Fraction)) for c in self.coordinates)

    def as_array(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coordinates], dtype=complex)

    def norm2(self):
        if self.is_exact:
            return sum(GaussianRational.coerce(c).abs2() for c in self.coordinates)
        return float(np.sum(np.abs(self.as_array()) ** 2))

    def to_json(self) -> list:
        out = []
        for c in self.coordinates:
            if isinstance(c, (GaussianRational, int, Fraction)):
                g = GaussianRational.coerce(c)
                out.append([format_rational(g.re), format_rational(g.im)])
            else:
                c = complex(c)
                out.append([c.real, c.imag])
        return out

    @classmethod
    def from_json(cls, pairs: Sequence[Sequence]) -> ComplexPoint:
        coords = []
        for re, im in pairs:
            if isinstance(re, str) and isinstance(im, str):
                coords.append(GaussianRational(re, im))
            else:
                coords.append(complex(float(re), float(im)))
        return cls(coords)


@dataclass(frozen=True)
class GroupElementAction:
    """One group element acting on C^{n+1}.

    ``kind`` is ``"circle"`` (``turn`` is w as a fraction of a full turn),
    ``"orthogonal"`` (``matrix`` is n x n orthogonal) or ``"tau"``.
    """

    kind: str
    d: int = 1
    turn: Fraction = Fraction(0)
    matrix: np.ndarray | None = field(default=None, compare=False)
    tol: float = 1e-10

    def __post_init__(self):
        if self.kind not in ("circle", "orthogonal", "tau"):
            raise ValueError(f"unknown action kind {self.kind!r}")
        if self.kind == "circle":
            object.__setattr__(self, "turn", parse_rational(self.turn))
        if self.kind == "orthogonal":
            if self.matrix is None:
                raise ValueError("orthogonal action needs a matrix")
            A = np.asarray(self.matrix, dtype=float)
            if A.ndim != 2 or A.shape[0] != A.shape[1]:
                raise ValueError("orthogonal action needs a square matrix")
            if not np.allclose(A.T @ A, np.eye(A.shape[0]), atol=self.tol, rtol=0):
                raise ValueError("matrix is not orthogonal")
            object.__setattr__(self, "matrix", A)

    @classmethod
    def circle(cls, turn, d: int) -> GroupElementAction:
        return cls("circle", d=d, turn=turn)

    @classmethod
    def orthogonal(cls, matrix, tol: float = 1e-10) -> GroupElementAction:
        return cls("orthogonal", matrix=matrix, tol=tol)

    @classmethod
    def tau(cls) -> GroupElementAction:
        return cls("tau")

    @property
    def w(self) -> complex:
        return cmath.exp(2j * math.pi * float(self.turn))


@dataclass(frozen=True)
class IsotropyClass:
    label: str
    group: str
    action: str

    LABELS = ("principal", "circleType", "reflectionType", "tauFixed", "sphereBoundaryType")

    def __post_init__(self):
        if self.label not in self.LABELS:
            raise ValueError(f"unknown isotropy label {self.label!r}")


@dataclass(frozen=True)
class FixedPoint:
    """An isolated tau-fixed point (0, ..., 0, lam) of W_eps.

    ``turn`` is arg(lam) / 2 pi exactly; ``modulus`` is |lam| = eps^(1/d) as an
    exact Fraction when that root is rational, otherwise None.
    """

    index: int
    point: ComplexPoint
    turn: Fraction
    modulus: Fraction | None
    modulus_float: float

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "point": self.point.to_json(),
            "arg_turn": format_rational(self.turn),
            "modulus": format_rational(self.modulus) if self.modulus is not None else self.modulus_float,
        }


# --------------------------------------------------------------------------
# polynomial and membership
# --------------------------------------------------------------------------
def _check_dim(data: BrieskornData, z) -> None:
    if len(z) != data.n + 1:
        raise ValueError(f"expected {data.n + 1} coordinates, got {len(z)}")


def evaluate_polynomial(data: BrieskornData, z: ComplexPoint | Sequence):
    """f_d(z) = sum_j z_j^2 + z_{n+1}^d; exact for exact coordinates."""
    _check_dim(data, z)
    coords = list(z)
    total = sum((c * c for c in coords[:-1]), start=0)
    return total + coords[-1] ** data.d


def on_link(data: BrieskornData, z: ComplexPoint, tol: float) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    _check_dim(data, z)
    z = z if isinstance(z, ComplexPoint) else ComplexPoint(z)
    value = evaluate_polynomial(data, z)
    if z.is_exact:
        value = GaussianRational.coerce(value)
        if tol == 0:
            return value == data.epsilon and z.norm2() == 1
        return abs(complex(value) - float(data.epsilon)) <= tol and abs(float(z.norm2()) - 1) <= tol
    if tol == 0:
        raise ValueError("tol = 0 is only meaningful for exact coordinates")
    return abs(complex(value) - float(data.epsilon)) <= tol and abs(z.norm2() - 1) <= tol


def in_variety(data: BrieskornData, z: ComplexPoint, tol: float) -> bool:
    """Membership in W_eps: f(z) = eps and |z| <= 1."""
    z = z if isinstance(z, ComplexPoint) else ComplexPoint(z)
    _check_dim(data, z)
    value = complex(evaluate_polynomial(data, z))
    return abs(value - float(data.epsilon)) <= tol and float(z.norm2()) <= 1 + tol


# --------------------------------------------------------------------------
# group actions
# --------------------------------------------------------------------------
def apply_action(g: GroupElementAction, z: ComplexPoint | Sequence) -> ComplexPoint:
    coords = list(z)
    if len(coords) < 2:
        raise ValueError("need at least two coordinates")
    head, last = coords[:-1], coords[-1]
    if g.kind == "tau":
        return ComplexPoint([-c for c in head] + [last])
    if g.kind == "orthogonal":
        A = g.matrix
        if A.shape[0] != len(head):
            raise ValueError(f"matrix is {A.shape[0]}x{A.shape[0]} but point has {len(head)} rotated coordinates")
        u = np.array([complex(c) for c in head])
        return ComplexPoint(list(A @ u) + [last])
    # circle element: exact when w^d and w^2 are Gaussian rationals
    wd = _root_power(g.turn * g.d)
    w2 = _root_power(g.turn * 2)
    return ComplexPoint([wd * c for c in head] + [w2 * last])


def action_matrix(g: GroupElementAction, size: int) -> np.ndarray:
    """The complex-linear map of ``g`` on C^size as a matrix."""
    mat = np.eye(size, dtype=complex)
    if g.kind == "tau":
        mat[:-1, :-1] *= -1
    elif g.kind == "orthogonal":
        if g.matrix.shape[0] != size - 1:
            raise ValueError(f"matrix is {g.matrix.shape[0]}x{g.matrix.shape[0]} but {size - 1} coordinates rotate")
        mat[:-1, :-1] = g.matrix
    else:
        mat[:-1, :-1] *= complex(_root_power(g.turn * g.d))
        mat[-1, -1] = complex(_root_power(g.turn * 2))
    return mat


def _root_power(turn: Fraction):
    """exp(2 pi i turn), exact when it is one of 1, i, -1, -i."""
    t = Fraction(turn) % 1
    exact = {Fraction(0): (1, 0), Fraction(1, 4): (0, 1), Fraction(1, 2): (-1, 0), Fraction(3, 4): (0, -1)}
    if t in exact:
        return GaussianRational(*exact[t])
    return cmath.exp(2j * math.pi * float(t))


# --------------------------------------------------------------------------
# fixed points and the Z_2d permutation
# --------------------------------------------------------------------------
def exact_root(q: Fraction, d: int) -> Fraction | None:
    """The positive rational d-th root of q >= 0 if it exists."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")

    def iroot(k: int) -> int | None:
        r = round(k ** (1.0 / d)) if k else 0
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** d == k:
                return cand
        return None

    num, den = iroot(q.numerator), iroot(q.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def tau_fixed_points(data: BrieskornData) -> list[FixedPoint]:
    """The d isolated fixed points of tau on W_eps, sorted by argument."""
    eps = data.epsilon
    if eps == 0:
        raise ValueError("epsilon = 0: the fibre is singular at the origin and tau has no isolated fixed points there")
    if not 0 < eps < 1:
        raise ValueError("fixed points need 0 < epsilon < 1")
    d = data.d
    modulus = exact_root(eps, d)
    r = float(modulus) if modulus is not None else float(eps) ** (1.0 / d)
    points = []
    for k in range(d):
        turn = Fraction(k, d)
        if modulus is not None and turn == 0:
            lam = GaussianRational(modulus, 0)
        else:
            lam = r * cmath.exp(2j * math.pi * float(turn))
        coords = [GaussianRational(0)] * data.n + [lam]
        points.append(FixedPoint(k, ComplexPoint(coords), turn, modulus, r))
    for p in points:
        if apply_action(GroupElementAction.tau(), p.point) != p.point:
            raise AssertionError("tau does not fix a computed fixed point")
    return points


def is_root_of_unity_turn(turn: Fraction, order: int) -> bool:
    return (Fraction(turn) * order).denominator == 1


def z2d_permutes_fixed_points(data: BrieskornData, turn) -> tuple[int, ...]:
    """Permutation of the fixed points under w = exp(2 pi i turn) in Z_2d.

    w acts on the last coordinate by w^2, i.e. it adds 2*turn to the argument
    (in turns); ``perm[i]`` is the index of the image of fixed point i.
    """
    turn = parse_rational(turn)
    if not is_root_of_unity_turn(turn, 2 * data.d):
        raise ValueError(f"exp(2 pi i {turn}) is not a {2 * data.d}-th root of unity")
    points = tau_fixed_points(data)
    by_turn = {p.turn: p.index for p in points}
    perm = []
    for p in points:
        image = (p.turn + 2 * turn) % 1
        perm.append(by_turn[image])
    return tuple(perm)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """(p o q)[i] = p[q[i]]."""
    return tuple(p[i] for i in q)


def cycle_decomposition(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen:
            continue
        cycle, i = [], start
        while i not in seen:
            seen.add(i)
            cycle.append(i)
            i = perm[i]
        cycles.append(tuple(cycle))
    return cycles


def is_full_cycle(perm: Sequence[int]) -> bool:
    return len(cycle_decomposition(perm)) == 1


def primitive_generator_turn(d: int) -> Fraction:
    """exp(i pi / d), the standard generator of Z_2d."""
    return Fraction(1, 2 * d)


# --------------------------------------------------------------------------
# tangent data at fixed points
# --------------------------------------------------------------------------
def gradient(data: BrieskornData, z: ComplexPoint | Sequence) -> np.ndarray:
    """Holomorphic gradient (df/dz_j)_j."""
    u = np.array([complex(c) for c in z])
    grad = 2 * u
    grad[-1] = data.d * u[-1] ** (data.d - 1) if data.d > 1 else 1.0
    return grad


@lru_cache(maxsize=4096)
def _rational_turn(x: float, max_denominator: int) -> tuple[Fraction, complex]:
    t = Fraction(x).limit_denominator(max_denominator) % 1
    return t, cmath.exp(2j * math.pi * float(t))


def tangent_rotation_turns(data: BrieskornData, point: ComplexPoint, action: GroupElementAction,
                           max_denominator: int = 64, tol: float = 1e-9) -> list[Fraction]:
    """Rotation angles (in turns) of a linear holomorphic symmetry fixing ``point``.

    The complex tangent space of {f = eps} at the point is ker df; we restrict
    the linear map to it and read off eigenvalue arguments.
    """
    return tangent_rotation_turns_many(data, [point], action, max_denominator, tol)[0]


def tangent_rotation_turns_many(data: BrieskornData, points: Sequence[ComplexPoint], action: GroupElementAction,
                                max_denominator: int = 64, tol: float = 1e-9) -> list[list[Fraction]]:
    """:func:`tangent_rotation_turns` at several points, with stacked linear algebra."""
    if not points:
        return []
    here = np.array([p.as_array() for p in points])
    grads = np.array([gradient(data, z) for z in here])
    if np.any(np.linalg.norm(grads, axis=1) < tol):
        raise ValueError("singular point of the fibre")
    # orthonormal basis of ker(v -> grad . v) in C^{n+1}, per point
    _, _, vh = np.linalg.svd(grads[:, None, :])
    basis = np.conj(vh[:, 1:, :]).transpose(0, 2, 1)
    mat = action_matrix(action, data.n + 1)
    if np.any(np.linalg.norm(here @ mat.T - here, axis=1) > tol):
        raise ValueError("the group element does not fix the point")
    restricted = np.conj(basis).transpose(0, 2, 1) @ mat @ basis
    if np.any(np.linalg.norm(mat @ basis - basis @ restricted, axis=(1, 2)) > tol):
        raise ValueError("the group element does not preserve the tangent space")
    eig = np.linalg.eigvals(restricted)
    if np.any(np.abs(np.abs(eig) - 1) > tol):
        raise ValueError("eigenvalue off the unit circle")
    phases = np.round(np.angle(eig) / (2 * math.pi), 12)
    out = []
    for row_phase, row_eig in zip(phases, eig):
        turns = []
        for x, lam in zip(row_phase, row_eig):
            t, root = _rational_turn(float(x), max_denominator)
            if abs(root - lam) > tol:
                raise ValueError("rotation angle is not a rational turn with small denominator")
            turns.append(t)
        out.append(sorted(turns))
    return out


# --------------------------------------------------------------------------
# isotropy
# --------------------------------------------------------------------------
def _real_span_rank(u: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(np.vstack([u.real, u.imag]), compute_uv=False)
    return int(np.sum(s > tol))


def isotropy_at(data: BrieskornData, z: ComplexPoint, tol: float = 1e-9) -> IsotropyClass:
    """Isotropy type of z.

    For eps = 0 the point must lie on Sigma_0 and the S^1 x O(n) action is
    used; for eps > 0 it must lie in W_eps and the O(n) action is used. The
    type is read off from the real span of Re(u), Im(u) for u = (z_1..z_n).
    """
    z = z if isinstance(z, ComplexPoint) else ComplexPoint(z)
    _check_dim(data, z)
    arr = z.as_array()
    u, last = arr[:-1], arr[-1]
    n = data.n
    rank = _real_span_rank(u, tol)
    if data.epsilon == 0:
        if not on_link(data, z, tol):
            raise ValueError("point is not on the link Sigma_0")
        action = "S1 x O(n) on Sigma_0"
        if abs(last) <= tol:
            return IsotropyClass("circleType", f"S1 x O({n - 2})", action)
        if rank == 2:
            return IsotropyClass("principal", f"Z2 x O({n - 2})", action)
        return IsotropyClass("reflectionType", f"Z2 x O({n - 1})", action)
    if not in_variety(data, z, tol):
        raise ValueError("point is not in W_eps")
    action = "O(n) on W_eps"
    if rank == 0:
        return IsotropyClass("tauFixed", f"O({n})", action)
    if rank == 1:
        if abs(last) <= tol:
            # the O(n)-orbit of (0,..,z_i,..,0), z_i^2 = eps; absent from Sigma_0
            return IsotropyClass("sphereBoundaryType", f"conjugate to O({n - 1})", action)
        return IsotropyClass("reflectionType", f"O({n - 1})", action)
    return IsotropyClass("principal", f"O({n - 2})", action)


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------
def project_to_link(data: BrieskornData, z: np.ndarray, max_steps: int = 50, tol: float = 1e-10) -> np.ndarray | None:
    """Newton-project a point of S^{2n+1} onto {f = eps} while staying on the sphere.

    Each step moves along the conjugate gradient of f (the normal direction of
    the fibre) and renormalizes. Returns None if it fails to converge.
    """
    eps = float(data.epsilon)
    z = np.asarray(z, dtype=complex)
    z = z / np.linalg.norm(z)
    for _ in range(max_steps):
        val = complex(evaluate_polynomial(data, list(z))) - eps
        if abs(val) < tol:
            return z
        g = np.conj(gradient(data, z))
        g2 = float(np.vdot(g, g).real)
        if g2 < 1e-14:
            return None
        z = z - val * g / g2
        z = z / np.linalg.norm(z)
    val = complex(evaluate_polynomial(data, list(z))) - eps
    return z if abs(val) < tol else None


def sample_link_points(data: BrieskornData, count: int, seed: int = 0, tol: float = 1e-10,
                       max_steps: int = 50) -> list[ComplexPoint]:
    rng = np.random.default_rng(seed)
    out: list[ComplexPoint] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 100 * count + 100:
            raise RuntimeError("link sampling keeps failing; epsilon may be too large for transversality")
        raw = rng.normal(size=data.n + 1) + 1j * rng.normal(size=data.n + 1)
        z = project_to_link(data, raw, max_steps=max_steps, tol=tol)
        if z is not None:
            out.append(ComplexPoint(list(z)))
    return out


def is_transversal(data: BrieskornData, z: ComplexPoint, tol: float = 1e-8) -> bool:
    """Whether {f = eps} meets the sphere transversally at z.

    The real Jacobian of (Re f, Im f, |z|^2) must have rank 3.
    """
    arr = z.as_array() if isinstance(z, ComplexPoint) else np.asarray(z, dtype=complex)
    g = gradient(data, arr)
    # d(Re f) and d(Im f) as real covectors on (Re z, Im z)
    d_re = np.concatenate([g.real, -g.imag])
    d_im = np.concatenate([g.imag, g.real])
    d_norm = 2 * np.concatenate([arr.real, arr.imag])
    s = np.linalg.svd(np.vstack([d_re, d_im, d_norm]), compute_uv=False)
    return bool(s[-1] > tol * max(1.0, s[0]))


def sample_variety_points(data: BrieskornData, count: int, seed: int = 0, scale: float = 0.6) -> list[ComplexPoint]:
    """Random interior points of W_eps: pick u, then solve z_{n+1}^d = eps - u.u."""
    rng = np.random.default_rng(seed)
    out: list[ComplexPoint] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 1000 * (count + 1):
            raise RuntimeError("could not sample points of W_eps")
        u = (rng.normal(size=data.n) + 1j * rng.normal(size=data.n)) * scale / math.sqrt(2 * data.n)
        rhs = complex(float(data.epsilon)) - complex(np.sum(u * u))
        k = int(rng.integers(data.d))
        last = abs(rhs) ** (1.0 / data.d) * cmath.exp(1j * (cmath.phase(rhs) + 2 * math.pi * k) / data.d)
        z = np.concatenate([u, [last]])
        if np.linalg.norm(z) < 1:
            out.append(ComplexPoint(list(z)))
    return out
