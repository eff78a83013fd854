"""Command-line front end: CSV/JSON data and SVG plots.

Subcommands cover orbit simulation, the planar phase portrait, frequency
evaluation (pointwise and on grids with a nondegeneracy heatmap), range
boundaries, bifurcation curves, the periodicity rank test, periodic
orbit construction, and the period lower-bound table.

Conventions: rational inputs are accepted as ``p/q`` and parsed exactly;
CSV files carry a ``#``-prefixed metadata block plus a header row; JSON
documents carry ``"schema": "confocal/1"``; SVG output is deterministic
up to a version comment.  Exit codes: 0 success, 2 domain error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from .bifurcation import (
    TYPE_SIGMA,
    range_boundary,
    trace_g,
)
from .errors import (
    AmbiguousCount,
    ConfocalError,
    NoConvergence,
    NonConvergent,
    PoleTooClose,
    SingularSystem,
)
from .frequency import frequency, normalized_jacobian, rotation_number_2d
from .geometry import (
    Ellipsoid,
    billiard_orbit,
    caustic_param,
    caustics_of_line,
    lambda_of_phase,
    phase_to_state,
    separatrix_r,
    sigma_of_lambda,
)
from .periodic import (
    cayley_test,
    invert_frequency,
    kappa_table,
    refine_periodic,
    state_with_caustics,
    winding_from_orbit,
)
from .svg import Canvas, color_scale

SCHEMA = "confocal/1"

_NUMERIC_ERRORS = (NonConvergent, NoConvergence, SingularSystem,
                   PoleTooClose, AmbiguousCount)


# ---------------------------------------------------------------------------
# parsing and output helpers


def parse_number(text: str) -> float:
    """Parse a scalar, accepting exact rationals written as ``p/q``."""
    text = text.strip()
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def parse_vector(text: str) -> tuple[float, ...]:
    return tuple(parse_number(t) for t in text.split(",") if t.strip())


def parse_axes(text: str) -> Ellipsoid:
    vals = sorted(parse_vector(text))
    return Ellipsoid(vals)


def parse_sigma(text: str) -> tuple[int, ...]:
    """Caustic type given as a name (``h1h1``) or bit vector (``1,0``)."""
    t = text.strip().upper().replace("-", "")
    if t in TYPE_SIGMA:
        return TYPE_SIGMA[t]
    return tuple(int(v) for v in text.split(","))


def thread_count(default: int = 4) -> int:
    env = os.environ.get("CONFOCAL_THREADS")
    if env:
        return max(1, int(env))
    return default


def write_atomic(path: str, data: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        f.write(data)
    os.replace(tmp, path)


def csv_document(header: list[str], rows, metadata: dict) -> str:
    out = io.StringIO()
    for key in sorted(metadata):
        out.write(f"# {key}={metadata[key]}\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(
            v if isinstance(v, str) else f"{v:.17g}" for v in row) + "\n")
    return out.getvalue()


def json_document(payload: dict) -> str:
    doc = {"schema": SCHEMA}
    doc.update(payload)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def emit(path: str | None, data: str) -> None:
    if path:
        write_atomic(path, data)
    else:
        sys.stdout.write(data)


# ---------------------------------------------------------------------------
# subcommands


def cmd_orbit(args) -> int:
    e = parse_axes(args.axes)
    if args.start:
        vals = parse_vector(args.start)
        dim = e.n + 1
        if len(vals) != 2 * dim:
            raise ValueError(f"--start needs {2 * dim} numbers (q then p)")
        from .geometry import PhasePoint
        q = e.project(np.array(vals[:dim]))
        p = np.array(vals[dim:])
        x = PhasePoint(q, p / np.linalg.norm(p))
    else:
        if e.n != 1:
            raise ValueError("--phi/--r starts are for planar billiards; "
                             "use --start for higher dimensions")
        x = phase_to_state(e, parse_number(args.phi), parse_number(args.r))

    orbit = billiard_orbit(e, x, args.steps)
    lam0 = caustics_of_line(e, orbit[0].q, orbit[0].p).lam
    drift = 0.0
    for pt in orbit[1:]:
        lam_k = caustics_of_line(e, pt.q, pt.p).lam
        drift = max(drift, float(np.max(np.abs(
            np.array(lam_k) - np.array(lam0)))))
    sigma = sigma_of_lambda(e, lam0)

    dim = e.n + 1
    header = [f"q{i}" for i in range(dim)] + [f"p{i}" for i in range(dim)]
    rows = [tuple(pt.q) + tuple(pt.p) for pt in orbit]
    meta = {"axes": ",".join(f"{v:.17g}" for v in e.semiaxes),
            "steps": args.steps, "seed": args.seed,
            "lambda": ",".join(f"{v:.17g}" for v in lam0)}
    emit(args.out, csv_document(header, rows, meta))
    summary = json_document({
        "axes": list(e.semiaxes),
        "lambda": list(lam0),
        "sigma": list(sigma),
        "caustic_drift": drift,
        "steps": args.steps,
    })
    if args.summary:
        write_atomic(args.summary, summary)
    elif args.out:
        sys.stdout.write(summary)
    return 0


def cmd_phase_portrait(args) -> int:
    e = parse_axes(args.axes)
    if e.n != 1:
        raise ValueError("phase portraits are planar; give two semiaxes")
    b, a = e.semiaxes
    r_max = float(np.sqrt(a))
    cv = Canvas(xlim=(0.0, 2 * np.pi), ylim=(-r_max, r_max),
                title=f"phase portrait a={a:g} b={b:g}")
    phis = np.linspace(0.0, 2 * np.pi, max(64, args.grid))

    levels = args.levels
    for k in range(1, levels + 1):
        lam = b * k / (levels + 1)
        for sign in (1.0, -1.0):
            r = sign * np.sqrt((a - b) * np.sin(phis) ** 2 + b - lam)
            cv.polyline(list(zip(phis, r)), stroke="#1f77b4", width=1.0)
    for k in range(1, levels + 1):
        lam = b + (a - b) * k / (levels + 1)
        val = (a - b) * np.sin(phis) ** 2 + b - lam
        mask = val > 0.0
        for sign in (1.0, -1.0):
            seg = []
            for phi, v, ok in zip(phis, val, mask):
                if ok:
                    seg.append((phi, sign * np.sqrt(v)))
                elif seg:
                    cv.polyline(seg, stroke="#2ca02c", width=1.0)
                    seg = []
            cv.polyline(seg, stroke="#2ca02c", width=1.0)
    for sign in (1.0, -1.0):
        cv.polyline([(phi, sign * separatrix_r(e, phi)) for phi in phis],
                    stroke="#d62728", width=1.6)
    cv.frame(xlabel="phi", ylabel="r")
    emit(args.out, cv.render())
    return 0


def cmd_freq(args) -> int:
    e = parse_axes(args.axes)
    lam = caustic_param(e, parse_vector(args.lam)).lam
    f = frequency(e, lam)
    emit(args.out, json_document({
        "axes": list(e.semiaxes),
        "lambda": list(lam),
        "omega": list(f.omega),
        "source": f.source,
        "residual": f.residual,
    }))
    return 0


def _sigma_box(e: Ellipsoid, sigma):
    ext = (0.0,) + tuple(e.semiaxes)
    return [(ext[j + s], ext[j + s + 1])
            for j, s in enumerate(sigma, start=1)]


def cmd_freq_grid(args) -> int:
    e = parse_axes(args.axes)
    if e.n != 2:
        raise ValueError("frequency grids are for triaxial billiards")
    sigma = parse_sigma(args.sigma)
    boxes = _sigma_box(e, sigma)
    res = args.res
    margin = 1e-3

    def cell_values(box):
        lo, hi = box
        t = (np.arange(res) + 0.5) / res
        return lo + (margin + (1 - 2 * margin) * t) * (hi - lo)

    l1s, l2s = cell_values(boxes[0]), cell_values(boxes[1])
    cells = [(i, j, l1, l2)
             for i, l1 in enumerate(l1s) for j, l2 in enumerate(l2s)
             if l1 < l2]

    def work(cell):
        i, j, l1, l2 = cell
        try:
            f = frequency(e, (l1, l2))
            jstar = normalized_jacobian(e, (l1, l2))
        except ConfocalError:
            return i, j, l1, l2, None, None
        return i, j, l1, l2, f.omega, jstar

    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        results = list(pool.map(work, cells))

    rows = []
    grid = np.full((res, res), np.nan)
    for i, j, l1, l2, omega, jstar in results:
        if omega is None:
            continue
        rows.append((l1, l2, omega[0], omega[1], jstar))
        grid[i, j] = jstar
    meta = {"axes": ",".join(f"{v:.17g}" for v in e.semiaxes),
            "sigma": ",".join(map(str, sigma)), "res": res,
            "tol": 1e-13}
    emit(args.out, csv_document(
        ["lambda1", "lambda2", "omega1", "omega2", "jstar"], rows, meta))

    if args.svg:
        cv = Canvas(xlim=boxes[0], ylim=boxes[1],
                    title=f"normalized Jacobian, type {args.sigma}")
        d1 = (l1s[1] - l1s[0]) / 2 if res > 1 else 0.01
        d2 = (l2s[1] - l2s[0]) / 2 if res > 1 else 0.01
        for i, l1 in enumerate(l1s):
            for j, l2 in enumerate(l2s):
                if np.isfinite(grid[i, j]):
                    cv.cell(l1 - d1, l2 - d2, l1 + d1, l2 + d2,
                            color_scale(grid[i, j]))
        cv.frame(xlabel="lambda1", ylabel="lambda2")
        write_atomic(args.svg, cv.render())
    return 0


def cmd_range(args) -> int:
    e = parse_axes(args.axes)
    if e.n != 2:
        raise ValueError("frequency ranges are for triaxial billiards")
    c, b, a = e.semiaxes
    sigma = parse_sigma(args.sigma)
    rb = range_boundary(a, b, c, sigma)
    meta = {"axes": ",".join(f"{v:.17g}" for v in e.semiaxes),
            "sigma": ",".join(map(str, sigma)),
            "type": rb.type_name, "area": f"{rb.area():.17g}"}
    outs = args.out or [None]
    for out in outs:
        if out and out.endswith(".svg"):
            cv = Canvas(xlim=(0.0, 0.55), ylim=(0.0, 0.55),
                        title=f"frequency range {rb.type_name}")
            cv.polyline([tuple(p) for p in rb.points],
                        stroke="#d62728", width=1.5)
            cv.polyline([(0, 0), (0.5, 0.5)], stroke="#999999", width=0.8,
                        dash="4,3")
            cv.frame(xlabel="omega1", ylabel="omega2")
            write_atomic(out, cv.render())
        else:
            emit(out, csv_document(
                ["omega1", "omega2"],
                [tuple(p) for p in rb.points], meta))
    return 0


def cmd_bifurcate(args) -> int:
    sigma = parse_sigma(args.sigma)
    omega0 = parse_vector(args.omega)
    b_grid = np.linspace(args.bmin, args.bmax, args.bcount)
    curve = trace_g(sigma, omega0, b_grid)
    meta = {"sigma": ",".join(map(str, sigma)),
            "omega0": args.omega, "a": 1.0}
    outs = args.out or [None]
    for out in outs:
        if out and out.endswith(".svg"):
            cv = Canvas(xlim=(0.0, 1.0), ylim=(0.0, 1.0),
                        title=f"bifurcation curve, omega0={args.omega}")
            cv.polyline([tuple(row) for row in curve],
                        stroke="#1f77b4", width=1.5)
            cv.polyline([(0, 0), (1, 1)], stroke="#999999", width=0.8,
                        dash="4,3")
            cv.frame(xlabel="b", ylabel="c = g(b)")
            write_atomic(out, cv.render())
        else:
            emit(out, csv_document(["b", "g"],
                                   [tuple(r) for r in curve], meta))
    return 0


def cmd_cayley(args) -> int:
    e = parse_axes(args.axes)
    lam = parse_vector(args.lam)
    rows = []
    for m in range(e.n + 1, args.mmax + 1):
        rep = cayley_test(e, lam, m)
        rows.append((m, f"{rep.shape[0]}x{rep.shape[1]}", rep.residual))
    meta = {"axes": ",".join(f"{v:.17g}" for v in e.semiaxes),
            "lambda": ",".join(f"{v:.17g}" for v in lam)}
    emit(args.out, csv_document(["m", "shape", "residual"], rows, meta))
    return 0


def cmd_periodic(args) -> int:
    e = parse_axes(args.axes)
    sigma = parse_sigma(args.sigma)
    omega0 = parse_vector(args.omega)
    frac = [Fraction(t.strip()) for t in args.omega.split(",")]
    # the winding numbers are m_j = 2 m0 omega_j, so the candidate
    # period is the least m0 making all 2 m0 omega_j integers
    m0 = int(np.lcm.reduce([(2 * f).denominator for f in frac]))
    if any((f * 2 * m0).denominator != 1 for f in frac):
        raise ValueError("omega must be rational for a periodic orbit")

    lam = invert_frequency(e, sigma, omega0, seed_grid=args.seed_grid)
    x = state_with_caustics(e, lam.lam, seed=args.seed)
    # closure may occur at m0 or 2 m0 depending on the symmetry class
    last_err = None
    for period in (m0, 2 * m0):
        try:
            x_ref = refine_periodic(e, x, period)
            break
        except ConfocalError as exc:
            last_err = exc
    else:
        raise last_err
    orbit = billiard_orbit(e, x_ref, period)
    closure = float(np.linalg.norm(orbit[-1].q - orbit[0].q)
                    + np.linalg.norm(orbit[-1].p - orbit[0].p))
    wn = winding_from_orbit(e, orbit)
    emit(args.out, json_document({
        "axes": list(e.semiaxes),
        "sigma": list(sigma),
        "omega0": [float(f) for f in frac],
        "lambda": list(lam.lam),
        "winding": list(wn.m),
        "period": wn.period,
        "closure_residual": closure,
        "vertices": [list(pt.q) for pt in orbit],
    }))
    return 0


def cmd_lower_bounds(args) -> int:
    table = kappa_table(args.n)
    rows = [(",".join(map(str, sigma)), kappa)
            for sigma, kappa in sorted(table.items())]
    mean = sum(table.values()) / len(table)
    emit(args.out, csv_document(["sigma", "kappa"], rows,
                                {"n": args.n, "mean": f"{mean:.17g}"}))
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="confocal",
        description="billiards inside ellipsoids: dynamics, frequencies, "
                    "periodic orbits, bifurcations")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        sp.set_defaults(fn=fn)
        sp.add_argument("--seed", type=int, default=0)
        return sp

    sp = add("orbit", cmd_orbit, help="simulate a billiard orbit")
    sp.add_argument("--axes", required=True)
    sp.add_argument("--phi", default=None)
    sp.add_argument("--r", default=None)
    sp.add_argument("--start", default=None,
                    help="explicit start 'q...,p...' for any dimension")
    sp.add_argument("--steps", type=int, default=100)
    sp.add_argument("--out", default=None)
    sp.add_argument("--summary", default=None)

    sp = add("phase-portrait", cmd_phase_portrait,
             help="planar phase portrait with separatrix")
    sp.add_argument("--axes", required=True)
    sp.add_argument("--grid", type=int, default=256)
    sp.add_argument("--levels", type=int, default=8)
    sp.add_argument("--out", default=None)

    sp = add("freq", cmd_freq, help="frequency vector of one torus")
    sp.add_argument("--axes", required=True)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--out", default=None)

    sp = add("freq-grid", cmd_freq_grid,
             help="frequency and nondegeneracy over a caustic-type box")
    sp.add_argument("--axes", required=True)
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--res", type=int, default=24)
    sp.add_argument("--out", default=None)
    sp.add_argument("--svg", default=None)

    sp = add("range", cmd_range, help="frequency-range boundary polyline")
    sp.add_argument("--axes", required=True)
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--out", action="append", default=None)

    sp = add("bifurcate", cmd_bifurcate,
             help="bifurcation curve c = g(b) for a fixed frequency")
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--omega", required=True)
    sp.add_argument("--bmin", type=float, default=0.05)
    sp.add_argument("--bmax", type=float, default=0.95)
    sp.add_argument("--bcount", type=int, default=19)
    sp.add_argument("--out", action="append", default=None)

    sp = add("cayley", cmd_cayley, help="periodicity rank-test residuals")
    sp.add_argument("--axes", required=True)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--mmax", type=int, default=8)
    sp.add_argument("--out", default=None)

    sp = add("periodic", cmd_periodic,
             help="construct and refine a periodic orbit from a frequency")
    sp.add_argument("--axes", required=True)
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--omega", required=True)
    sp.add_argument("--seed-grid", type=int, default=24)
    sp.add_argument("--out", default=None)

    sp = add("lower-bounds", cmd_lower_bounds,
             help="minimal-period table by caustic type")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", default=None)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _NUMERIC_ERRORS as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3
    except (ConfocalError, ValueError) as exc:
        print(f"domain error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
