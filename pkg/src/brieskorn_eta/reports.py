"""Report assembly and rendering for the command line front end.

Builders return plain JSON-ready dicts; renderers turn them into JSON, CSV
or aligned text. Rationals are always "p/q" strings.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import numpy as np

from .brieskorn import (BrieskornData, cycle_decomposition, is_full_cycle, isotropy_at, primitive_generator_turn,
                        tau_fixed_points, z2d_permutes_fixed_points)
from .charts import brieskorn_charts, hopf_berger_lambda2, hopf_chart, load_charts, torus_chart
from .cheeger import deformed_metric, lift_plane_decomposition, noncommuting_pair, plane_profile, t0_sweep
from .classify import build_class_report, generate_family, kervaire_type, diffeo_class_key
from .eta import EtaTrace, brieskorn_relative_eta, plumbing_relative_eta
from .exact import format_rational

CSV_COLUMNS = ("d", "n_or_k", "eta_num", "eta_den", "diffeo_class", "kervaire", "components")


def _num(x: float) -> float | None:
    x = float(x)
    return x if np.isfinite(x) else None


# --------------------------------------------------------------------------
# builders
# --------------------------------------------------------------------------
def eta_report(d: int, n: int | None = None, k: int | None = None) -> dict:
    if (n is None) == (k is None):
        raise ValueError("give exactly one of n and k")
    trace = EtaTrace()
    if n is not None:
        value = brieskorn_relative_eta(n, d, trace=trace)
        dim, kind, n_or_k = 2 * n - 1, "brieskorn", f"n={n}"
        kerv = kervaire_type(n, d).value
        cls = diffeo_class_key(d, (n - 1) // 2)
    else:
        value = plumbing_relative_eta(k, d, trace=trace)
        dim, kind, n_or_k = 4 * k + 1, "plumbing", f"k={k}"
        kerv = kervaire_type(2 * k + 1, d).value
        cls = diffeo_class_key(d, k)
    return {"command": "eta", "pipeline": kind, "d": d, "n_or_k": n_or_k, "dimension": dim,
            "value": str(value), "kervaire": kerv, "diffeo_class": cls, "trace": trace.steps}


def fixedpoints_report(n: int, d: int, epsilon) -> dict:
    data = BrieskornData(n, d, epsilon)
    points = tau_fixed_points(data)
    rows = []
    for p in points:
        iso = isotropy_at(data, p.point)
        row = p.to_json()
        row["isotropy"] = {"label": iso.label, "group": iso.group}
        rows.append(row)
    gen = primitive_generator_turn(d)
    perm = z2d_permutes_fixed_points(data, gen)
    return {"command": "fixedpoints", "n": n, "d": d, "epsilon": format_rational(data.epsilon),
            "count": len(points), "points": rows,
            "permutation": {"generator_turn": format_rational(gen), "image": list(perm),
                            "cycles": [list(c) for c in cycle_decomposition(perm)],
                            "full_cycle": is_full_cycle(perm)}}


def classify_report(*, dim: int | None = None, d_max: int | None = None, k: int | None = None,
                    family: int | None = None, count: int | None = None) -> dict:
    if dim is not None:
        if dim != 5:
            raise ValueError("--dim supports 5 only; use --k for dimension 4k+1")
        if d_max is None or d_max < 1:
            raise ValueError("--d-max must be a positive integer")
        kk = 1
        ds = list(range(1, d_max + 1, 2))
    else:
        if k is None or family is None or count is None:
            raise ValueError("give --dim 5 --d-max N, or --k K --family D0 --count C")
        if count < 1:
            raise ValueError("--count must be at least 1")
        kk = k
        ds = [family] + generate_family(family, k, count - 1)
    n = 2 * kk + 1

    def eta_fn(d):
        value = brieskorn_relative_eta(n, d)
        if value != plumbing_relative_eta(kk, d):
            raise AssertionError("link and plumbing pipelines disagree")
        return value

    rep = build_class_report(ds, kk, eta_fn).to_json()
    rep["command"] = "classify"
    return rep


def _chart_set(chart: str, n: int, d: int, epsilon, samples: int, seed: int, curvature: str):
    if chart == "hopf":
        return [hopf_chart()]
    if chart == "torus":
        return [torus_chart()]
    if chart == "brieskorn":
        return brieskorn_charts(BrieskornData(n, d, epsilon), samples, seed=seed, curvature=curvature)
    return load_charts(chart)


def cheeger_report(chart: str, ts: list[float], t_max: float, steps: int = 64, n: int = 3, d: int = 3,
                   epsilon="1/2", samples: int = 32, seed: int = 0, curvature: str = "fixed_point_bump") -> dict:
    charts = _chart_set(chart, n, d, epsilon, samples, seed, curvature)
    chart_rows = []
    for i, c in enumerate(charts):
        pair = noncommuting_pair(c, seed=seed)
        prof = plane_profile(c)
        chart_rows.append({"index": i, "label": c.label, "orbit_dimension": int(np.sum(prof.p > 0)),
                           "noncommuting_pair": None if pair is None else [pair[0].tolist(), pair[1].tolist()]})
    profile = []
    for t in ts:
        for i, c in enumerate(charts):
            prof = plane_profile(c)
            dm = deformed_metric(c, t)
            row = {"t": _num(t), "chart": i, "scal_estimate": _num(prof.estimate(t)[0])}
            if c.dimension >= 2:
                # first basis plane: vertical-horizontal when the orbit is nontrivial
                dec = lift_plane_decomposition(dm, prof.basis[:, 0], prof.basis[:, -1])
                row.update({"alpha": _num(dec.alpha), "beta": _num(dec.beta), "bound": _num(dec.bound)})
            if chart == "hopf":
                row["berger_lambda2"] = _num(hopf_berger_lambda2(1.0, t))
                row["fiber_length2"] = _num(dm.h_t[0, 0])
            profile.append(row)
    sweep = t0_sweep(charts, t_max, steps)
    if sweep.certified:
        verdict = f"certified: scal estimate > 0 on [{sweep.t0!r}, {float(t_max)!r}] at every sample"
    elif np.all(sweep.estimates == 0):
        verdict = "none (scal = 0 identically)"
    else:
        verdict = "not certified at t_max"
    return {"command": "cheeger", "chart": chart, "charts": chart_rows, "profile": profile,
            "t0": {"t_max": _num(t_max), "steps_per_decade": steps, "grid_points": int(sweep.grid.size),
                   "t0": None if sweep.t0 is None else _num(sweep.t0), "verdict": verdict,
                   "min_estimate_at_t_max": _num(sweep.min_estimate()[-1])}}


# --------------------------------------------------------------------------
# renderers
# --------------------------------------------------------------------------
def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _eta_parts(value: str) -> tuple[int, int]:
    q = Fraction(value)
    return q.numerator, q.denominator


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cmd = report.get("command")
    if cmd == "eta":
        w.writerow(CSV_COLUMNS)
        num, den = _eta_parts(report["value"])
        w.writerow([report["d"], report["n_or_k"], num, den, report["diffeo_class"] or "", report["kervaire"], 1])
    elif cmd == "classify":
        w.writerow(CSV_COLUMNS)
        for r in report["rows"]:
            num, den = _eta_parts(r["eta"])
            w.writerow([r["d"], f"k={report['k']}", num, den, r["diffeo_class"], r["kervaire"], r["components"]])
    elif cmd == "fixedpoints":
        w.writerow(("index", "re", "im", "arg_turn", "modulus", "isotropy"))
        for p in report["points"]:
            re, im = p["point"][-1]
            w.writerow([p["index"], re, im, p["arg_turn"], p["modulus"], p["isotropy"]["label"]])
    elif cmd == "cheeger":
        w.writerow(("t", "chart", "alpha", "beta", "bound", "scal_estimate"))
        for r in report["profile"]:
            w.writerow([r["t"], r["chart"], r.get("alpha"), r.get("beta"), r.get("bound"), r["scal_estimate"]])
    else:
        raise ValueError(f"no CSV layout for {cmd!r}")
    return buf.getvalue()


def _table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [["" if c is None else str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(wd) for c, wd in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * wd for wd in widths))
    return "\n".join(lines) + "\n"


def to_text(report: dict) -> str:
    cmd = report.get("command")
    if cmd == "eta":
        head = f"relative eta, {report['pipeline']} d={report['d']} {report['n_or_k']} (dim {report['dimension']}): {report['value']}\n"
        rows = [[s["step"], s["value"] if not isinstance(s["value"], list) else " ".join(map(str, s["value"][:4]))
                 + (" ..." if len(s["value"]) > 4 else ""), s["rule"]] for s in report["trace"]]
        return head + _table(["step", "value", "rule"], rows)
    if cmd == "fixedpoints":
        head = f"{report['count']} tau-fixed points of W_eps, n={report['n']} d={report['d']} eps={report['epsilon']}\n"
        rows = [[p["index"], p["arg_turn"], p["modulus"], p["isotropy"]["label"], p["isotropy"]["group"]]
                for p in report["points"]]
        perm = report["permutation"]
        tail = f"generator exp(2 pi i {perm['generator_turn']}) cycles: {perm['cycles']} full cycle: {perm['full_cycle']}\n"
        return head + _table(["index", "arg_turn", "modulus", "isotropy", "group"], rows) + tail
    if cmd == "classify":
        head = (f"dimension {report['dimension']} (k={report['k']}): component lower bound "
                f"{report['component_lower_bound']}, {report['type_count_lower_bound']} types attained\n")
        rows = [[r["d"], r["eta"], r["diffeo_class"], r["kervaire"], r["components"]] for r in report["rows"]]
        rules = "".join(f"[{r['kind']}] {r['rule']}\n" for r in report["rules"])
        return head + _table(["d", "eta", "diffeo_class", "kervaire", "components"], rows) + rules
    if cmd == "cheeger":
        rows = [[r["t"], r["chart"], r.get("alpha"), r.get("beta"), r.get("bound"), r["scal_estimate"]]
                for r in report["profile"]]
        t0 = report["t0"]
        return (_table(["t", "chart", "alpha", "beta", "bound", "scal_estimate"], rows)
                + f"t0: {t0['t0']} ({t0['verdict']})\n")
    raise ValueError(f"no text layout for {cmd!r}")


RENDERERS = {"json": to_json, "csv": to_csv, "text": to_text}
