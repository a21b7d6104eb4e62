"""Built-in action charts and the JSON chart format.

Generators: the Hopf circle action on the round 3-sphere, flat tori acted on
by themselves, and the O(n)-action on the Milnor fibre W_eps of a Brieskorn
polynomial. Curvature of the Brieskorn charts is synthetic and selectable,
since the pointwise chart has no second-order data of its own.
"""
from __future__ import annotations

import json
import math
from typing import Callable

import numpy as np

from .brieskorn import (BrieskornData, ComplexPoint, gradient, isotropy_at, sample_variety_points,
                        tau_fixed_points)
from .cheeger import ActionChart, LieAlgebraData, so_basis

CURVATURE_MODELS = ("flat", "constant", "fixed_point_bump", "gauss")


def constant_curvature(kappa: float) -> Callable:
    def sec(v, w):
        return kappa
    return sec


def hopf_chart(q: float = 1.0) -> ActionChart:
    """u(1) acting on the unit 3-sphere by e^{i s}(z1, z2), at p = (1, 0, 0, 0).

    T_pS^3 has orthonormal basis i p, (0, 0, 1, 0), (0, 0, 0, 1); the Killing
    field of the generator is i p. Q = [[q]].
    """
    return ActionChart(np.eye(3), np.array([[1.0], [0.0], [0.0]]), LieAlgebraData.u1(q),
                       constant_curvature(1.0), label="hopf")


def hopf_berger_lambda2(q: float, t: float) -> float:
    """Squared fibre length of the Cheeger-deformed Hopf chart: q / (q + t)."""
    return q / (q + t)


def torus_chart(dim: int = 2) -> ActionChart:
    """T^dim acting on itself by translations with the flat metric."""
    return ActionChart(np.eye(dim), np.eye(dim), LieAlgebraData.abelian(dim), constant_curvature(0.0),
                       label=f"torus{dim}")


def random_chart(rng: np.random.Generator) -> ActionChart:
    """A random valid chart: SPD metric and Killing map of random rank."""
    M = int(rng.integers(2, 7))
    if rng.random() < 0.5:
        alg = LieAlgebraData.so(3)
        alg = LieAlgebraData(alg.structure, alg.Q * float(rng.uniform(0.5, 2.0)), alg.name)
    else:
        D = int(rng.integers(1, 5))
        R = rng.normal(size=(D, D))
        alg = LieAlgebraData.abelian(D, R @ R.T + D * np.eye(D))
    D = alg.dimension
    R = rng.normal(size=(M, M))
    h = R @ R.T + 0.5 * np.eye(M)
    rank = int(rng.integers(0, min(M, D) + 1))
    K = rng.normal(size=(M, rank)) @ rng.normal(size=(rank, D)) if rank else np.zeros((M, D))
    return ActionChart(h, K, alg, constant_curvature(float(rng.uniform(0.0, 2.0))), label="random")


# --------------------------------------------------------------------------
# Brieskorn O(n)-action charts
# --------------------------------------------------------------------------
def real_tangent_basis(data: BrieskornData, z: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns, in (Re z, Im z) coordinates) of T_z{f = eps}."""
    g = gradient(data, z)
    d_re = np.concatenate([g.real, -g.imag])
    d_im = np.concatenate([g.imag, g.real])
    _, s, vh = np.linalg.svd(np.vstack([d_re, d_im]))
    if s[-1] <= 1e-12 * max(1.0, s[0]):
        raise ValueError("singular point of the fibre")
    return vh[2:].T


def _complexify(T: np.ndarray, v: np.ndarray) -> np.ndarray:
    amb = T @ v
    N = amb.size // 2
    return amb[:N] + 1j * amb[N:]


def _gauss_curvature(data: BrieskornData, z: np.ndarray, T: np.ndarray) -> Callable:
    """Sectional curvature of the induced metric on the complex hypersurface {f = eps}.

    Gauss equation with second fundamental form Hess f / |df|:
    R(v, w, w, v) = (Re(H(v, v) conj H(w, w)) - |H(v, w)|^2) / |df|^2.
    """
    diag = np.full(z.size, 2.0, dtype=complex)
    diag[-1] = data.d * (data.d - 1) * z[-1] ** (data.d - 2) if data.d >= 2 else 0.0
    g2 = float(np.sum(np.abs(gradient(data, z)) ** 2))

    def sec(v, w):
        a, b = _complexify(T, v), _complexify(T, w)
        hvv, hww, hvw = np.sum(diag * a * a), np.sum(diag * b * b), np.sum(diag * a * b)
        num = (hvv * np.conj(hww)).real - abs(hvw) ** 2
        wedge = (v @ v) * (w @ w) - (v @ w) ** 2
        return float(num / (g2 * wedge))
    return sec


def brieskorn_chart(data: BrieskornData, z, curvature: str = "fixed_point_bump", kappa: float = 1.0,
                    radius: float = 0.25) -> ActionChart:
    """O(n)-action chart of W_eps at z with the induced flat-ambient metric in an orthonormal frame."""
    pt = z if isinstance(z, ComplexPoint) else ComplexPoint(list(z))
    arr = pt.as_array()
    n = data.n
    T = real_tangent_basis(data, arr)
    u = arr[:n]
    cols = []
    for E in so_basis(n):
        field_c = np.concatenate([E @ u, [0.0]])
        cols.append(T.T @ np.concatenate([field_c.real, field_c.imag]))
    K = np.column_stack(cols)
    kind, _, arg = curvature.partition(":")
    if kind == "flat":
        sec = constant_curvature(0.0)
    elif kind == "constant":
        sec = constant_curvature(float(arg) if arg else kappa)
    elif kind == "fixed_point_bump":
        dist = min(np.linalg.norm(arr - p.point.as_array()) for p in tau_fixed_points(data))
        sec = constant_curvature(kappa if dist < radius else 0.0)
    elif kind == "gauss":
        sec = _gauss_curvature(data, arr, T)
    else:
        raise ValueError(f"unknown curvature model {curvature!r}; choose from {', '.join(CURVATURE_MODELS)}")
    label = isotropy_at(data, pt).label
    return ActionChart(np.eye(T.shape[1]), K, LieAlgebraData.so(n), sec, label=label)


def brieskorn_sample_points(data: BrieskornData, samples: int, seed: int = 0) -> list[ComplexPoint]:
    """The tau-fixed points, the points sqrt(eps) e_i, then random points of W_eps."""
    pts = [p.point for p in tau_fixed_points(data)]
    r = math.sqrt(float(data.epsilon))
    for i in range(data.n):
        coords = [0j] * (data.n + 1)
        coords[i] = complex(r)
        pts.append(ComplexPoint(coords))
    pts = pts[:samples]
    if len(pts) < samples:
        pts.extend(sample_variety_points(data, samples - len(pts), seed=seed))
    return pts


def brieskorn_charts(data: BrieskornData, samples: int = 32, seed: int = 0, curvature: str = "fixed_point_bump",
                     kappa: float = 1.0, radius: float = 0.25) -> list[ActionChart]:
    return [brieskorn_chart(data, p, curvature, kappa, radius) for p in brieskorn_sample_points(data, samples, seed)]


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------
class ChartFormatError(ValueError):
    pass


def load_charts(source) -> list[ActionChart]:
    """Parse a chart file.

    Schema::

        {"algebra": {"structure_constants": D x D x D, "Q": D x D},
         "charts": [{"label": str, "h": M x M, "killing": M x D,
                     "sec_h": number}]}

    Matrices are row-major nested arrays; ``sec_h`` is a constant sectional
    curvature for the chart. Any failing invariant raises ChartFormatError
    naming it.
    """
    if isinstance(source, (str, bytes)) and not str(source).lstrip().startswith("{"):
        with open(source, encoding="utf-8") as fh:
            obj = json.load(fh)
    elif isinstance(source, dict):
        obj = source
    else:
        obj = json.loads(source)
    try:
        alg_obj = obj["algebra"]
        c = np.asarray(alg_obj["structure_constants"], dtype=float)
        Q = np.asarray(alg_obj["Q"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ChartFormatError(f"algebra: {exc}") from exc
    try:
        alg = LieAlgebraData(c, Q, name=str(alg_obj.get("name", "")))
    except ValueError as exc:
        raise ChartFormatError(f"algebra: {exc}") from exc
    entries = obj.get("charts")
    if not isinstance(entries, list) or not entries:
        raise ChartFormatError("charts: expected a nonempty list")
    charts = []
    for i, entry in enumerate(entries):
        try:
            sec = entry.get("sec_h")
            charts.append(ActionChart(np.asarray(entry["h"], dtype=float), np.asarray(entry["killing"], dtype=float),
                                      alg, constant_curvature(float(sec)) if sec is not None else None,
                                      label=str(entry.get("label", f"chart{i}"))))
        except (KeyError, TypeError, ValueError) as exc:
            raise ChartFormatError(f"charts[{i}]: {exc}") from exc
    return charts


def chart_to_json(chart: ActionChart, sec_h: float | None = None) -> dict:
    out = {"label": chart.label, "h": chart.h.tolist(), "killing": chart.killing.tolist()}
    if sec_h is not None:
        out["sec_h"] = sec_h
    return out
