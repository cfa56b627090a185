"""Maximization of smooth objectives over the probability simplex.

The workhorse is exponentiated-gradient (mirror) ascent with a monotone
line search, run from many starts in lockstep so each iteration is a
single batched linear-algebra call. Because concavity of the objectives
is not assumed, a dense simplex-grid certificate can be layered on top
for small alphabets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .config import RunConfig
from .typeclasses import enumerate_types

ValueFn = Callable[[np.ndarray], np.ndarray]
ValueGradFn = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]

_STEP_GROW = 1.25
_STEP_MIN = 1e-14
_MAX_HALVINGS = 12


@dataclass(frozen=True)
class SimplexMaximum:
    """Outcome of a multistart simplex maximization."""

    value: float
    point: np.ndarray
    iterations: int
    converged: bool
    start_count: int


def simplex_grid(dim: int, step: float) -> np.ndarray:
    """All probability vectors with coordinates in multiples of ``step``."""
    n = max(1, round(1.0 / step))
    types = enumerate_types(n, dim)
    return np.asarray([t.counts for t in types], dtype=float) / n


def _natural_grad_norms(points: np.ndarray, grads: np.ndarray) -> np.ndarray:
    """Stationarity measure that vanishes at simplex-constrained optima."""
    mean = (points * grads).sum(axis=1, keepdims=True)
    return np.abs(points * (grads - mean)).sum(axis=1)


def exp_grad_ascent(
    value_fn: ValueFn,
    value_grad_fn: ValueGradFn,
    starts: np.ndarray,
    *,
    max_iters: int,
    grad_tol: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, int]:
    """Run EG ascent from every row of ``starts`` simultaneously.

    Steps are multiplicative, p' = p * exp(eta * g) renormalized; eta is
    halved until the value improves and grown gently on success. A start
    finishes when its natural gradient norm drops below ``grad_tol`` or
    when no step of any usable size improves the value (numerically
    stationary). Returns (final points, values, natural gradient norms,
    finished flags, total iterations).
    """
    points = np.array(starts, dtype=float)
    k = points.shape[0]
    values, grads = value_grad_fn(points)
    # Scale-free initial step per start.
    spread = np.abs(grads - grads.max(axis=1, keepdims=True)).max(axis=1)
    eta = 1.0 / (1.0 + spread)
    active = np.ones(k, dtype=bool)
    finished = np.zeros(k, dtype=bool)
    total_iters = 0

    for _ in range(max_iters):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        gnorm = _natural_grad_norms(points[idx], grads[idx])
        done = gnorm <= grad_tol
        active[idx[done]] = False
        finished[idx[done]] = True
        idx = idx[~done]
        if idx.size == 0:
            break
        total_iters += 1

        # Retire duplicates: starts that already coincide keep only one
        # representative iterating (results are unaffected, the survivor
        # carries the shared optimum).
        if idx.size > 1:
            order = idx[np.argsort(values[idx])[::-1]]
            pts = points[order]
            dist = np.abs(pts[:, None, :] - pts[None, :, :]).max(axis=2)
            dup = np.zeros(order.size, dtype=bool)
            for late in range(1, order.size):
                if (dist[late, :late][~dup[:late]] < 1e-12).any():
                    dup[late] = True
            active[order[dup]] = False
            idx = idx[active[idx]]
            if idx.size == 0:
                break

        pending = idx
        rounds = 0
        while pending.size:
            g = grads[pending]
            # Shift before exponentiating: the update is shift-invariant
            # and unshifted gradients can overflow near alpha = 1.
            shifted = g - g.max(axis=1, keepdims=True)
            trial = points[pending] * np.exp(eta[pending, None] * shifted)
            trial = np.clip(trial, 0.0, None)
            trial /= trial.sum(axis=1, keepdims=True)
            trial_vals = value_fn(trial)
            improved = trial_vals > values[pending] + 1e-15
            acc = pending[improved]
            if acc.size:
                points[acc] = trial[improved]
                values[acc] = trial_vals[improved]
                eta[acc] *= _STEP_GROW
            rej = pending[~improved]
            eta[rej] *= 0.5
            stalled = eta[rej] < _STEP_MIN
            rounds += 1
            if rounds >= _MAX_HALVINGS:
                # The remaining starts cannot improve at any usable step:
                # they sit at their numerical optimum, so stop iterating them.
                stalled = np.ones(rej.size, dtype=bool)
            active[rej[stalled]] = False
            finished[rej[stalled]] = True
            pending = rej[~stalled]

        recompute = np.flatnonzero(active)
        if recompute.size:
            values[recompute], grads[recompute] = value_grad_fn(points[recompute])

    gnorm = _natural_grad_norms(points, grads)
    finished |= gnorm <= grad_tol
    return points, values, gnorm, finished, total_iters


def standard_starts(dim: int, count: int, seed_key: Sequence[int]) -> np.ndarray:
    """Uniform point, smoothed vertices, then seeded Dirichlet fills.

    Vertices are smoothed toward the interior because exact vertices are
    fixed points of the multiplicative update; the exact vertices are
    still evaluated separately by the caller.
    """
    rows = [np.full(dim, 1.0 / dim)]
    for x in range(dim):
        v = np.full(dim, 0.05 / max(dim - 1, 1))
        v[x] = 0.95
        rows.append(v / v.sum())
    rng = np.random.default_rng(list(seed_key))
    while len(rows) < max(count, 1):
        rows.append(rng.dirichlet(np.ones(dim)))
    return np.asarray(rows)


def maximize_on_simplex(
    value_fn: ValueFn,
    value_grad_fn: ValueGradFn,
    dim: int,
    config: RunConfig,
    *,
    seed_key: Sequence[int] = (0,),
    warm_starts: Sequence[np.ndarray] = (),
    use_grid_certificate: bool | None = None,
) -> SimplexMaximum:
    """Multistart EG ascent with vertex candidates and a grid certificate.

    ``warm_starts`` are extra start points (e.g. optima from neighboring
    parameter values); they only add candidates and never replace the
    standard multistart set, so results are reproducible.
    """
    starts = standard_starts(dim, config.multistarts, seed_key)
    extra = [np.asarray(w, dtype=float) for w in warm_starts]
    extra = [w / w.sum() for w in extra if w.shape == (dim,) and w.min() >= 0 and w.sum() > 0]
    if extra:
        starts = np.vstack([starts, np.asarray(extra)])

    if use_grid_certificate is None:
        use_grid_certificate = dim <= config.cert_grid_max_alphabet
    if use_grid_certificate:
        grid = simplex_grid(dim, config.cert_grid_step)
        grid_vals = value_fn(grid)
        best = int(np.argmax(grid_vals))
        # Refine from the certificate's winner (smoothed off the boundary).
        anchor = grid[best] + 1e-6
        starts = np.vstack([starts, anchor / anchor.sum()])

    points, values, gnorms, finished, iters = exp_grad_ascent(
        value_fn,
        value_grad_fn,
        starts,
        max_iters=config.eg_max_iters,
        grad_tol=config.eg_grad_tol,
    )

    candidates = [points]
    candidate_vals = [values]
    vertices = np.eye(dim)
    candidates.append(vertices)
    candidate_vals.append(value_fn(vertices))
    if use_grid_certificate:
        candidates.append(grid)
        candidate_vals.append(grid_vals)

    all_points = np.vstack(candidates)
    all_vals = np.concatenate(candidate_vals)
    winner = int(np.argmax(all_vals))
    point = all_points[winner]
    # Converged when some finished EG run reached the winning value; a bare
    # vertex or grid candidate that no run reproduced counts as unconverged.
    best_finished = values[finished].max() if finished.any() else -np.inf
    converged = bool(best_finished >= all_vals[winner] - 1e-12)
    return SimplexMaximum(
        value=float(all_vals[winner]),
        point=point.copy(),
        iterations=iters,
        converged=converged,
        start_count=starts.shape[0],
    )
