"""Small numerical optimizers shared by the divergence, channel and protocol modules."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar


def thread_count() -> int:
    """Worker count for multistart loops, capped by the ``QCD_THREADS`` variable."""
    try:
        n = int(os.environ.get("QCD_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def ordered_map(fn: Callable, items: Sequence) -> list:
    """Map preserving input order; parallel when ``QCD_THREADS`` > 1.

    Every task must own its random state so results do not depend on the
    number of workers.
    """
    workers = thread_count()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def grid_refine_max(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    n_grid: int = 101,
    xtol: float = 1e-6,
    grid: np.ndarray | None = None,
) -> tuple[float, float]:
    """Maximize a scalar function on ``[lo, hi]``: uniform grid then bounded refinement.

    ``f`` receives an array of abscissae and returns the matching values;
    non-finite values are allowed (``+inf`` short-circuits, ``nan`` counts as
    ``-inf``).  Returns ``(argmax, max)``.
    """
    xs = np.linspace(lo, hi, n_grid) if grid is None else np.asarray(grid, dtype=float)
    vals = np.asarray(f(xs), dtype=float)
    vals = np.where(np.isnan(vals), -np.inf, vals)
    k = int(np.argmax(vals))
    if np.isposinf(vals[k]) or np.isneginf(vals[k]):
        return float(xs[k]), float(vals[k])
    a = xs[max(k - 1, 0)]
    b = xs[min(k + 1, len(xs) - 1)]
    best_x, best_v = float(xs[k]), float(vals[k])
    if b > a:
        def neg(x):
            v = float(np.asarray(f(np.array([x])), dtype=float)[0])
            return np.inf if np.isnan(v) else -v

        res = minimize_scalar(neg, bounds=(a, b), method="bounded", options={"xatol": xtol})
        if np.isfinite(res.fun) and -res.fun > best_v:
            best_x, best_v = float(res.x), float(-res.fun)
    return best_x, best_v


def sphere_ascent(
    f_batch: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    fd_step: float = 1e-5,
    tol: float = 1e-7,
    max_iter: int = 300,
    project: Callable[[np.ndarray], np.ndarray] | None = None,
) -> tuple[np.ndarray, float]:
    """Projected gradient ascent of ``f`` on the unit sphere of ``C^d``.

    ``f_batch`` maps a stack of unit vectors ``(k, d)`` to ``k`` values.  The
    gradient is a central finite difference in the real coordinates, projected
    to the tangent space; steps are retracted by normalization, sized by a
    Barzilai-Borwein guess and accepted with an Armijo test.  ``project``
    optionally maps an iterate back to a feasible set after each step.

    Stops when the value improves by less than ``tol`` over five consecutive
    iterations, or after ``max_iter`` iterations.
    """
    d = x0.shape[0]
    x = x0 / np.linalg.norm(x0)
    if project is not None:
        x = project(x)
    fx = float(f_batch(x[None])[0])
    if not np.isfinite(fx):
        return x, fx
    # real coordinates: 2d directions
    E = np.concatenate([np.eye(d), 1j * np.eye(d)])
    step = 0.1
    prev_g = prev_x = None
    stall = 0
    for _ in range(max_iter):
        pts = np.concatenate([x + fd_step * E, x - fd_step * E])
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        vals = f_batch(pts)
        if not np.all(np.isfinite(vals)):
            break
        gr = (vals[: 2 * d] - vals[2 * d :]) / (2 * fd_step)
        g = gr[:d] + 1j * gr[d:]
        g = g - np.real(np.vdot(x, g)) * x
        gn = np.linalg.norm(g)
        if gn < 1e-12:
            break
        if prev_g is not None:
            s = x - prev_x
            y = g - prev_g
            sy = np.real(np.vdot(s, y))
            if sy < 0:
                step = float(np.clip(np.real(np.vdot(s, s)) / -sy, 1e-6, 10.0))
        accepted = False
        t = step
        for _ in range(30):
            xn = x + t * g
            xn /= np.linalg.norm(xn)
            if project is not None:
                xn = project(xn)
            fn = float(f_batch(xn[None])[0])
            if np.isfinite(fn) and fn >= fx + 1e-4 * t * gn * gn:
                accepted = True
                break
            if np.isposinf(fn):
                x, fx = xn, fn
                return x, fx
            t *= 0.5
        if not accepted:
            break
        prev_g, prev_x = g, x
        gain = fn - fx
        x, fx = xn, fn
        step = t
        stall = stall + 1 if gain < tol else 0
        if stall >= 5:
            break
    return x, fx
