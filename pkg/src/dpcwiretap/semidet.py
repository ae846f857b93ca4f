"""Numerical search for the semi-deterministic wiretap secrecy capacity.

When ``Y1 = f(X, S)`` the secrecy capacity is

    max over p(x|s) of  min{ H(Y1|S), H(Y1|Y2) }.

The objective is not jointly concave in ``p(x|s)``, so the search here is a
multi-restart coordinate ascent whose result is a lower estimate of the
maximum, not a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, ModelError
from .pmf import JointPmf

MAX_ALPHABET = 8
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SearchResult:
    value: float
    p_x_given_s: np.ndarray
    lower_estimate: bool = True


def _as_vector(state_dist) -> np.ndarray:
    if isinstance(state_dist, JointPmf):
        if state_dist.arity != 1:
            raise ModelError("state distribution must be over a single variable")
        return np.asarray(state_dist.table, dtype=float)
    ps = np.asarray(state_dist, dtype=float)
    JointPmf(ps)
    return ps


def check_semideterministic(channel: np.ndarray, tol: float = 1e-12) -> None:
    """Raise :class:`ModelError` unless every ``(x, s)`` yields a single ``y1``."""
    w = np.asarray(channel, dtype=float)
    if w.ndim != 4:
        raise ModelError(f"channel must have axes (x, s, y1, y2), got shape {w.shape}")
    if (w < -tol).any() or not np.allclose(w.sum(axis=(2, 3)), 1.0, atol=1e-9):
        raise ModelError("each (x, s) row of the channel must be a pmf")
    w1 = w.sum(axis=3)
    if not np.all(np.isclose(w1.max(axis=2), 1.0, atol=tol)):
        raise ModelError("Y1 is not a deterministic function of (X, S)")


def objective(p_x_given_s: np.ndarray, channel: np.ndarray, ps: np.ndarray) -> float:
    """``min{H(Y1|S), H(Y1|Y2)}`` under input law ``p(x|s)``."""
    joint = np.einsum("s,xs,xsab->sab", ps, p_x_given_s, channel)
    ys1 = joint.sum(axis=2)
    y12 = joint.sum(axis=0)
    h_y1_s = _h(ys1) - _h(ps)
    h_y1_y2 = _h(y12) - _h(y12.sum(axis=0))
    return min(h_y1_s, h_y1_y2)


def _h(p) -> float:
    p = np.asarray(p).ravel()
    p = p[p > 1e-300]
    return float(-(p * np.log2(p)).sum())


def _line_search(f, grid: int = 17, iters: int = 40) -> tuple[float, float]:
    ts = np.linspace(0.0, 1.0, grid)
    vals = [f(t) for t in ts]
    k = int(np.argmax(vals))
    lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, grid - 1)]
    best_t, best_v = ts[k], vals[k]
    a, b = lo, hi
    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    for t, v in ((c, fc), (d, fd)):
        if v > best_v:
            best_t, best_v = t, v
    return best_t, best_v


def _ascend(p: np.ndarray, channel, ps, max_sweeps: int, tol: float) -> tuple[np.ndarray, float]:
    nx, ns = p.shape
    best = objective(p, channel, ps)
    for _ in range(max_sweeps):
        start = best
        for s in range(ns):
            for i in range(nx):
                for j in range(i + 1, nx):
                    mass = p[i, s] + p[j, s]
                    if mass <= 0.0:
                        continue

                    def f(t, i=i, j=j, s=s, mass=mass):
                        trial = p.copy()
                        trial[i, s] = t * mass
                        trial[j, s] = (1.0 - t) * mass
                        return objective(trial, channel, ps)

                    t, v = _line_search(f)
                    if v > best + 1e-15:
                        p[i, s] = t * mass
                        p[j, s] = (1.0 - t) * mass
                        best = v
        if best - start < tol:
            break
    return p, best


def semidet_capacity_search(channel, state_dist, restarts: int = 4, seed: int = 0,
                            max_sweeps: int = 30, tol: float = 1e-10) -> SearchResult:
    """Maximise ``min{H(Y1|S), H(Y1|Y2)}`` over ``p(x|s)``.

    Parameters
    ----------
    channel : array, shape (|X|, |S|, |Y1|, |Y2|)
        Transition probabilities ``p(y1, y2 | x, s)``.
    state_dist : array or JointPmf
        Law of the state ``S``.
    restarts : int
        Number of starting points; the first is always the uniform input.
    seed : int
        Base seed; restart ``k`` draws from the ``k``-th spawned child seed.

    Returns
    -------
    SearchResult
        Best value found and the ``p(x|s)`` attaining it.
    """
    w = np.asarray(channel, dtype=float)
    check_semideterministic(w)
    ps = _as_vector(state_dist)
    nx, ns = w.shape[:2]
    if ps.shape != (ns,):
        raise ModelError(f"state pmf has shape {ps.shape}, channel expects ({ns},)")
    if max(w.shape) > MAX_ALPHABET:
        raise BudgetExceededError(f"alphabet sizes {w.shape} exceed {MAX_ALPHABET}")
    children = np.random.SeedSequence(seed).spawn(max(restarts, 1))
    best_val, best_p = -np.inf, None
    for k, child in enumerate(children):
        if k == 0:
            p0 = np.full((nx, ns), 1.0 / nx)
        else:
            p0 = np.random.default_rng(child).dirichlet(np.ones(nx), size=ns).T
        p, v = _ascend(p0, w, ps, max_sweeps, tol)
        if v > best_val:
            best_val, best_p = v, p
    return SearchResult(value=max(best_val, 0.0), p_x_given_s=best_p)
