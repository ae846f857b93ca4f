"""Closed-form rates for Costa's channel and the degraded Gaussian wiretap channel.

All rates are in bits per channel use. The wiretap model is

    Y1 = h1 X + g1 S + N1,    Y2 = beta Y1 + N,

with ``X`` under unit power, ``S`` and ``N1`` standard Gaussian, and
``N ~ N(0, 1 - beta**2)``. Equivalently ``Y2 = h2 X + g2 S + N2`` with
``(h2, g2) = beta (h1, g1)`` and unit-variance ``N2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateMIError, ExistenceError, UndefinedRateError


def _half_log2(x: float) -> float:
    if x <= 0.0:
        return -math.inf
    return 0.5 * math.log2(x)


def _pos(x: float) -> float:
    return x if x > 0.0 else 0.0


@dataclass(frozen=True)
class GaussWiretapParams:
    h1: float
    g1: float
    beta: float

    def __post_init__(self):
        for name in ("h1", "g1", "beta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if abs(self.beta) > 1.0:
            raise ValueError(f"|beta| must be at most 1, got {self.beta}")

    @property
    def h2(self) -> float:
        return self.beta * self.h1

    @property
    def g2(self) -> float:
        return self.beta * self.g1

    @property
    def h1sq(self) -> float:
        return self.h1 * self.h1

    @property
    def g1sq(self) -> float:
        return self.g1 * self.g1


@dataclass(frozen=True)
class RateBounds:
    lower: float
    upper: float

    @property
    def gap(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class KeyBounds:
    """Secret-key bounds; ``lower`` is ``None`` where it is not claimed."""

    lower: float | None
    upper: float
    valid: bool

    @property
    def gap(self) -> float | None:
        return None if self.lower is None else self.upper - self.lower


# -- Costa's dirty-paper channel ---------------------------------------------

def costa_capacity(h: float) -> float:
    return 0.5 * math.log2(1.0 + h * h)


def costa_suboptimal_rate(h: float, g: float) -> float:
    """Rate of the auxiliary ``U = hX + gS`` on Costa's channel."""
    h2, g2 = h * h, g * g
    if h2 + g2 == 0.0:
        raise UndefinedRateError("U = hX + gS is degenerate when h = g = 0")
    return _pos(_half_log2((1.0 + h2 + g2) * h2 / (h2 + g2)))


# -- Gaussian mutual information oracle --------------------------------------

def check_covariance(cov, tol: float = 1e-10) -> np.ndarray:
    c = np.asarray(cov, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError(f"covariance must be square, got shape {c.shape}")
    if not np.allclose(c, c.T, atol=1e-12):
        raise ValueError("covariance must be symmetric")
    if c.size and np.linalg.eigvalsh(c).min() < -tol:
        raise ValueError("covariance must be positive semidefinite")
    return c


def _logdet(c: np.ndarray, idx: Sequence[int]) -> float:
    sign, ld = np.linalg.slogdet(c[np.ix_(idx, idx)])
    if sign <= 0:
        return -math.inf
    return ld


def mi_gaussian(cov, group_u: Sequence[int], group_v: Sequence[int]) -> float:
    """``I(U; V)`` in bits for jointly Gaussian index groups of ``cov``.

    ``0.5 * log2(det S_U * det S_V / det S_UV)``.
    """
    c = check_covariance(cov)
    u, v = list(group_u), list(group_v)
    if not u or not v:
        raise ValueError("both groups must be nonempty")
    if set(u) & set(v):
        raise ValueError("groups must be disjoint")
    ld_uv = _logdet(c, u + v)
    # relative threshold: det of the joint against the product of variances
    scale = float(np.sum(np.log(np.maximum(np.diag(c)[u + v], 1e-300))))
    if not math.isfinite(ld_uv) or ld_uv - scale < -30.0:
        raise DegenerateMIError("joint covariance of the two groups is singular")
    ld_u, ld_v = _logdet(c, u), _logdet(c, v)
    val = 0.5 * (ld_u + ld_v - ld_uv) / math.log(2.0)
    return max(val, 0.0)


# variable order of wiretap_covariance
U, X, S, Y1, Y2 = range(5)


def wiretap_covariance(h1: float, g1: float, h2: float, g2: float,
                       alpha: float = 1.0, rho: float = 0.0) -> np.ndarray:
    """Covariance of ``(U, X, S, Y1, Y2)`` with ``U = h1 X + alpha g1 S``.

    ``rho = E[XS]``; the receiver noises are independent and standard.
    """
    if abs(rho) > 1.0:
        raise ValueError("correlation must lie in [-1, 1]")
    # independent sources: X, S, N1, N2
    src = np.eye(4)
    src[0, 1] = src[1, 0] = rho
    mix = np.array([
        [h1, alpha * g1, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [h1, g1, 1.0, 0.0],
        [h2, g2, 0.0, 1.0],
    ])
    return mix @ src @ mix.T


def degraded_covariance(p: GaussWiretapParams, alpha: float = 1.0,
                        rho: float = 0.0) -> np.ndarray:
    """Covariance of ``(U, X, S, Y1, Y2)`` built from ``Y2 = beta Y1 + N``."""
    b = p.beta
    src = np.diag([1.0, 1.0, 1.0, 1.0 - b * b])
    src[0, 1] = src[1, 0] = rho
    y1 = np.array([p.h1, p.g1, 1.0, 0.0])
    mix = np.array([
        [p.h1, alpha * p.g1, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        y1,
        b * y1 + np.array([0.0, 0.0, 0.0, 1.0]),
    ])
    return mix @ src @ mix.T


# -- closed forms for U = h1 X + g1 S ----------------------------------------

def mi_u_s(h1: float, g1: float) -> float:
    return _half_log2(1.0 + g1 * g1 / (h1 * h1)) if h1 != 0.0 else math.inf


def mi_u_y1(h1: float, g1: float) -> float:
    return _half_log2(1.0 + h1 * h1 + g1 * g1)


def mi_u_y2(h1: float, g1: float, h2: float, g2: float) -> float:
    p1 = h1 * h1 + g1 * g1
    cross = h1 * g2 - h2 * g1
    return _half_log2(p1 * (1.0 + h2 * h2 + g2 * g2) / (p1 + cross * cross))


def rs_closed_form(h1: float, g1: float, h2: float, g2: float) -> float:
    """Achievable secrecy rate of ``U = h1 X + g1 S`` for general coefficients."""
    p1 = h1 * h1 + g1 * g1
    if p1 == 0.0:
        raise UndefinedRateError("U is degenerate when h1 = g1 = 0")
    cross = h1 * g2 - h2 * g1
    first = _half_log2((1.0 + p1) * h1 * h1 / p1)
    second = _half_log2((1.0 + p1) * (p1 + cross * cross) / (p1 * (1.0 + h2 * h2 + g2 * g2)))
    return _pos(min(first, second))


# -- degraded model ----------------------------------------------------------

def rate_terms(p: GaussWiretapParams, alpha: float = 1.0) -> tuple[float, float]:
    """``(I(U;Y1) - I(U;S), I(U;Y1) - I(U;Y2))`` for ``U = h1 X + alpha g1 S``."""
    if p.h1 == 0.0:
        if alpha * p.g1 == 0.0:
            raise UndefinedRateError("U = h1 X + alpha g1 S is identically zero")
        # U is a scaled copy of S, so I(U;S) is infinite
        return -math.inf, 0.0
    c = degraded_covariance(p, alpha)
    i_y1 = mi_gaussian(c, [U], [Y1])
    return i_y1 - mi_gaussian(c, [U], [S]), i_y1 - mi_gaussian(c, [U], [Y2])


def secrecy_rate_achievable(p: GaussWiretapParams, alpha: float = 1.0) -> float:
    return _pos(min(rate_terms(p, alpha)))


def secrecy_rates(p: GaussWiretapParams, alphas) -> np.ndarray:
    """Vectorised :func:`secrecy_rate_achievable` over an array of ``alpha``.

    Uses the batch covariance of ``(U, S, Y1, Y2)`` and the scalar identity
    ``I = -0.5 log2(1 - corr**2)``.
    """
    a = np.atleast_1d(np.asarray(alphas, dtype=float))
    if p.h1 == 0.0:
        if np.any(a * p.g1 == 0.0):
            raise UndefinedRateError("U = h1 X + alpha g1 S is identically zero")
        return np.zeros_like(a)
    b = p.beta
    src = np.diag([1.0, 1.0, 1.0, 1.0 - b * b])
    y1 = np.array([p.h1, p.g1, 1.0, 0.0])
    mix = np.zeros((a.size, 4, 4))
    mix[:, 0, 0] = p.h1
    mix[:, 0, 1] = a * p.g1
    mix[:, 1, 1] = 1.0
    mix[:, 2] = y1
    mix[:, 3] = b * y1 + np.array([0.0, 0.0, 0.0, 1.0])
    cov = mix @ src @ np.swapaxes(mix, 1, 2)

    def mi(j):
        c2 = cov[:, 0, j] ** 2 / (cov[:, 0, 0] * cov[:, j, j])
        return -0.5 * np.log2(1.0 - c2)

    i_y1 = mi(2)
    rate = np.minimum(i_y1 - mi(1), i_y1 - mi(3))
    return np.maximum(rate, 0.0)


def h1_low_sq(g1: float, beta: float) -> float:
    """Below this ``h1**2`` the Costa-like ``alpha`` attains the capacity."""
    if beta == 0.0:
        return math.inf
    g = abs(g1)
    return _pos(-g * g / 2.0 - 1.0 + g / 2.0 * math.sqrt(g * g + 4.0 / beta ** 2 - 4.0))


def h1_high_sq(g1: float, beta: float) -> float:
    """From this ``h1**2`` on the maximising ``alpha`` is exactly 1."""
    if beta == 0.0:
        return math.inf
    g = abs(g1)
    return -g * g / 2.0 + g / 2.0 * math.sqrt(g * g + 4.0 / beta ** 2)


def alpha_star(p: GaussWiretapParams) -> float:
    """Maximiser of the achievable rate over ``U = h1 X + alpha g1 S``."""
    if p.g1 == 0.0:
        return 1.0
    h1sq, g, b = p.h1sq, abs(p.g1), p.beta
    if h1sq < h1_low_sq(p.g1, b):
        return h1sq / (h1sq + 1.0)
    if h1sq < h1_high_sq(p.g1, b):
        b2 = b * b
        return b2 * h1sq * (g + math.sqrt(h1sq + g * g + 1.0 / b2)) / (g * (1.0 + b2 * h1sq))
    return 1.0


def _secrecy_terms(p: GaussWiretapParams) -> tuple[float, float, float, float]:
    h1sq, pw, b2 = p.h1sq, p.h1sq + p.g1sq, p.beta ** 2
    a = _half_log2(1.0 + h1sq)
    b = _half_log2((2.0 * pw + 1.0) / (2.0 * b2 * pw + 1.0))
    c = _half_log2((1.0 + pw) * h1sq / pw) if pw > 0.0 else -math.inf
    d = _half_log2((1.0 + pw) / (1.0 + b2 * pw))
    return a, b, c, d


def secrecy_bounds(p: GaussWiretapParams) -> RateBounds:
    a, b, c, d = _secrecy_terms(p)
    return RateBounds(lower=_pos(min(c, d)), upper=min(a, b))


def h1_threshold_sq(g1: float) -> float:
    """Smallest ``h1**2`` at which ``U = h1 X + g1 S`` keeps ``I(U;Y1) >= I(U;S)``."""
    g = abs(g1)
    return -g * g / 2.0 + g / 2.0 * math.sqrt(g * g + 4.0)


def secret_key_bounds(p: GaussWiretapParams) -> KeyBounds:
    _, b, _, d = _secrecy_terms(p)
    valid = p.h1sq >= h1_threshold_sq(p.g1)
    return KeyBounds(lower=d if valid else None, upper=b, valid=valid)


_RADICAND_TOL = 1e-12


def rho_star(h1: float, g1: float) -> float:
    """Correlation ``E[XS]`` of the correlated-input key scheme."""
    h1sq, pw = h1 * h1, h1 * h1 + g1 * g1
    if pw == 0.0:
        return 0.0
    if h1sq == 0.0:
        raise ExistenceError("rho* does not exist for h1 = 0 with g1 != 0")
    radicand = 1.0 - pw / ((1.0 + pw) * h1sq)
    if -_RADICAND_TOL <= radicand < 0.0:
        radicand = 0.0  # rounding at the threshold itself
    if radicand < 0.0:
        raise ExistenceError(
            f"rho* needs h1^2 >= {h1_threshold_sq(g1):.6g}, got h1^2 = {h1sq:.6g}")
    sign = 1.0 if h1 * g1 >= 0.0 else -1.0
    return sign * math.sqrt(radicand)


def rho_star_radicand(h1: float, g1: float) -> float:
    h1sq, pw = h1 * h1, h1 * h1 + g1 * g1
    return 1.0 - pw / ((1.0 + pw) * h1sq)


def key_rate(p: GaussWiretapParams, rho: float = 0.0) -> float:
    """``[I(U;Y1) - I(U;Y2)]^+`` for ``U = h1 X + g1 S`` with ``E[XS] = rho``."""
    c = degraded_covariance(p, 1.0, rho)
    return _pos(mi_gaussian(c, [U], [Y1]) - mi_gaussian(c, [U], [Y2]))


def key_constraint_margin(p: GaussWiretapParams, rho: float = 0.0) -> float:
    """``I(U;Y1) - I(U;S)``; the key scheme needs this to be nonnegative."""
    if p.h1 == 0.0 and p.g1 != 0.0:
        return -math.inf
    c = degraded_covariance(p, 1.0, rho)
    return mi_gaussian(c, [U], [Y1]) - mi_gaussian(c, [U], [S])


# -- figure data ---------------------------------------------------------------

def _key_rate_rho_star(p: GaussWiretapParams) -> float | None:
    if not secret_key_bounds(p).valid:
        return None
    return key_rate(p, rho_star(p.h1, p.g1))


CURVES = {
    "alpha_star": alpha_star,
    "secrecy_rate_alpha_star": lambda p: secrecy_rate_achievable(p, alpha_star(p)),
    "secrecy_rate_alpha_1": lambda p: secrecy_rate_achievable(p, 1.0),
    "secrecy_lower": lambda p: secrecy_bounds(p).lower,
    "secrecy_upper": lambda p: secrecy_bounds(p).upper,
    "key_lower": lambda p: secret_key_bounds(p).lower,
    "key_upper": lambda p: secret_key_bounds(p).upper,
    "key_rate_rho_star": _key_rate_rho_star,
    "key_rate_rho_0": lambda p: key_rate(p, 0.0) if secret_key_bounds(p).valid else None,
}


def sweep(curve: str, grid: Sequence[float], g1: float = 1.0,
          beta: float = 0.5) -> list[tuple[float, float | None]]:
    """Evaluate ``curve`` at each ``h1**2`` in ``grid``; ``None`` marks not-applicable."""
    try:
        fn = CURVES[curve]
    except KeyError:
        raise ValueError(f"unknown curve {curve!r}; choose from {sorted(CURVES)}") from None
    rows = []
    for h1sq in grid:
        if h1sq < 0:
            raise ValueError(f"grid values must be nonnegative, got {h1sq}")
        p = GaussWiretapParams(math.sqrt(h1sq), g1, beta)
        rows.append((float(h1sq), fn(p)))
    return rows
