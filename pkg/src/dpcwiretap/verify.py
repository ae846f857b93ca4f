"""Self-check suites run by ``dpcwiretap verify``.

Each suite returns a :class:`SuiteResult` with the number of checks made,
the number that failed, and a description of the first failure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import binning, deterministic as det, gaussian as gs, gf2
from .pmf import JointPmf


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: int = 0
    first_failure: str | None = None

    def record(self, ok: bool, detail) -> None:
        self.checks += 1
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = detail() if callable(detail) else str(detail)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{self.name}: {status} ({self.checks} checks, {self.failures} failures)"
        if self.first_failure:
            line += f"\n  first failure: {self.first_failure}"
        return line


def log_grid(lo: float, hi: float, points: int) -> np.ndarray:
    return np.geomspace(lo, hi, points)


def det_formulas(max_gain: int = 5) -> SuiteResult:
    res = SuiteResult("det-formulas")
    for t in itertools.product(range(max_gain + 1), repeat=4):
        p = det.DetWiretapParams(*t)
        a, b = det.channel_matrices(p)
        cases = det.det_secrecy_capacity_cases(p)
        ranked = det.det_secrecy_capacity_rank(p)
        counted = det.stacked_rank_by_counting(p) == gf2.rank(gf2.vstack(a, b))
        key = det.det_secret_key_capacity(p)
        ok = cases == ranked and counted and key >= cases and 0 <= cases <= p.n1
        res.record(ok, lambda: f"{t}: cases={cases} rank={ranked} key={key} "
                               f"count_ok={counted}")
    return res


def entropy_oracle(max_q: int = 3) -> SuiteResult:
    res = SuiteResult("entropy-oracle")
    for t in itertools.product(range(max_q + 1), repeat=4):
        p = det.DetWiretapParams(*t)
        h_s, h_y2 = det.entropy_oracle(p)
        a, b = det.channel_matrices(p)
        want = det.max_cond_entropy_formula(a, b)
        ok = abs(h_s - p.n1) <= 1e-9 and abs(h_y2 - want) <= 1e-9
        res.record(ok, lambda: f"{t}: H(Y1|S)={h_s} (want {p.n1}), "
                               f"H(Y1|Y2)={h_y2} (want {want})")
    return res


def random_gf2(rng: np.random.Generator, rows: int, cols: int) -> gf2.Gf2Matrix:
    return gf2.Gf2Matrix(rng.integers(0, 2, size=(rows, cols)), ncols=cols)


def cond_entropy_rank(trials: int = 200, dists: int = 50, max_cols: int = 12,
           seed: int = 2024) -> SuiteResult:
    res = SuiteResult("lemma1")
    rng = np.random.default_rng(seed)
    for t in range(trials):
        k = int(rng.integers(1, max_cols + 1))
        a = random_gf2(rng, int(rng.integers(1, 7)), k)
        b = random_gf2(rng, int(rng.integers(1, 7)), k)
        formula = det.max_cond_entropy_formula(a, b)
        uniform = det.exhaustive_cond_entropy(a, b)
        res.record(abs(formula - uniform) <= 1e-9,
                   lambda: f"trial {t}: formula {formula} vs uniform enumeration {uniform}")
        for _ in range(dists):
            dist = JointPmf.bernoulli_product(rng.uniform(0.0, 1.0, size=k))
            h = det.exhaustive_cond_entropy(a, b, dist)
            res.record(h <= formula + 1e-9,
                       lambda: f"trial {t}: product distribution reached {h} > {formula}")
    return res


def costa_gap(points: int = 30) -> SuiteResult:
    res = SuiteResult("costa-gap")
    for hs in log_grid(1e-3, 1e3, points):
        for gsq in log_grid(1e-3, 1e3, points):
            h, g = math.sqrt(hs), math.sqrt(gsq)
            gap = gs.costa_capacity(h) - gs.costa_suboptimal_rate(h, g)
            res.record(-1e-12 <= gap <= 0.5,
                       lambda: f"h^2={hs:.6g} g^2={gsq:.6g}: gap {gap}")
    return res


BETAS = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.99)


def secrecy_gap(points: int = 20, betas=BETAS) -> SuiteResult:
    res = SuiteResult("thm3-gap")
    for hs in log_grid(1e-3, 1e3, points):
        for gsq in log_grid(1e-3, 1e3, points):
            for b in betas:
                rb = gs.secrecy_bounds(gs.GaussWiretapParams(math.sqrt(hs), math.sqrt(gsq), b))
                res.record(rb.gap <= 0.5 + 1e-9 and rb.lower >= 0.0 and rb.gap >= -1e-12,
                           lambda: f"h1^2={hs:.6g} g1^2={gsq:.6g} beta={b}: {rb}")
    return res


def _close(a: float, b: float, rel: float = 1e-9) -> bool:
    return math.isclose(a, b, rel_tol=rel, abs_tol=1e-12)


def mi_oracle(draws: int = 500, seed: int = 7) -> SuiteResult:
    res = SuiteResult("mi-oracle")
    rng = np.random.default_rng(seed)
    for k in range(draws):
        h1, g1 = rng.uniform(-3.0, 3.0, size=2)
        b, alpha = rng.uniform(-1.0, 1.0), rng.uniform(-2.0, 2.0)
        h2, g2 = b * h1, b * g1
        p = gs.GaussWiretapParams(float(h1), float(g1), float(b))
        c = gs.wiretap_covariance(h1, g1, h2, g2)
        got = (gs.mi_gaussian(c, [gs.U], [gs.S]), gs.mi_gaussian(c, [gs.U], [gs.Y1]),
               gs.mi_gaussian(c, [gs.U], [gs.Y2]))
        want = (gs.mi_u_s(h1, g1), gs.mi_u_y1(h1, g1), gs.mi_u_y2(h1, g1, h2, g2))
        res.record(all(_close(x, y) for x, y in zip(got, want)),
                   lambda: f"draw {k}: oracle {got} vs closed form {want}")
        rs = gs.secrecy_rate_achievable(p, 1.0)
        closed = gs.rs_closed_form(h1, g1, h2, g2)
        res.record(_close(rs, closed) and _close(rs, gs.secrecy_bounds(p).lower),
                   lambda: f"draw {k}: R_s oracle {rs} vs closed form {closed}")
        ra = gs.secrecy_rate_achievable(p, float(alpha))
        res.record(ra <= gs.secrecy_bounds(p).upper + 1e-9,
                   lambda: f"draw {k}: alpha={alpha} rate {ra} above the upper bound")
    return res


def alpha_star_suite(points: int = 50, g1: float = 1.0, beta: float = 0.5) -> SuiteResult:
    res = SuiteResult("alpha-star")
    lo, hi = gs.h1_low_sq(g1, beta), gs.h1_high_sq(g1, beta)
    alphas = np.linspace(-2.0, 2.0, 1001)
    for hs in log_grid(1e-3, 1e3, points):
        p = gs.GaussWiretapParams(math.sqrt(hs), g1, beta)
        a = gs.alpha_star(p)
        r_star = gs.secrecy_rate_achievable(p, a)
        r_one = gs.secrecy_rate_achievable(p, 1.0)
        best = float(gs.secrecy_rates(p, alphas).max())
        res.record(r_star >= r_one - 1e-9, lambda: f"h1^2={hs:.6g}: alpha* {r_star} < alpha=1 {r_one}")
        res.record(best <= r_star + 1e-6, lambda: f"h1^2={hs:.6g}: line search {best} > {r_star}")
        if hs >= hi:
            res.record(a == 1.0, lambda: f"h1^2={hs:.6g} >= {hi:.6g} but alpha*={a}")
        if hs <= lo:
            up = gs.secrecy_bounds(p).upper
            res.record(abs(r_star - up) <= 1e-6,
                       lambda: f"h1^2={hs:.6g} <= {lo:.6g}: rate {r_star} vs upper {up}")
    return res


def key_gap(points: int = 20, betas=BETAS) -> SuiteResult:
    res = SuiteResult("key-gap")
    for hs in log_grid(1e-3, 1e3, points):
        for gsq in log_grid(1e-3, 1e3, points):
            h1, g1 = math.sqrt(hs), math.sqrt(gsq)
            thr = gs.h1_threshold_sq(g1)
            rad = gs.rho_star_radicand(h1, g1)
            near = abs(hs - thr) <= 1e-12 * max(1.0, thr)
            res.record(near or (rad >= 0.0) == (hs >= thr),
                       lambda: f"h1^2={hs:.6g} g1^2={gsq:.6g}: radicand {rad} vs threshold {thr}")
            for b in betas:
                p = gs.GaussWiretapParams(h1, g1, b)
                kb = gs.secret_key_bounds(p)
                if not kb.valid:
                    continue
                sb = gs.secrecy_bounds(p)
                res.record(kb.gap <= 0.5 + 1e-9 and kb.lower >= sb.lower - 1e-9,
                           lambda: f"h1^2={hs:.6g} g1^2={gsq:.6g} beta={b}: {kb} vs {sb}")
    return res


def binning_configs(count: int = 50, seed: int = 11) -> list[binning.BinningConfig]:
    """Desk-scale configurations spanning blind, full-rank and interference-heavy channels."""
    rng = np.random.default_rng(seed)
    fixed = [(2, 1, 1, 1), (2, 0, 1, 0), (1, 2, 1, 0), (0, 0, 0, 0),
             (2, 2, 0, 0), (1, 1, 1, 1), (3, 1, 2, 2), (1, 3, 2, 1)]
    cfgs = []
    while len(cfgs) < count:
        if len(cfgs) < len(fixed):
            gains = fixed[len(cfgs)]
        else:
            gains = tuple(int(v) for v in rng.integers(0, 4, size=4))
        ch = det.DetWiretapParams(*gains)
        q = max(ch.q, 1)
        n = int(rng.integers(1, max(2, min(4, 12 // q)) + 1))
        k = int(rng.integers(0, min(3, n * q) + 1))
        kp = int(rng.integers(0, 3))
        cfgs.append(binning.BinningConfig(ch, n, k / n, kp / n, int(rng.integers(0, 2**31))))
    return cfgs


def binning_invariants(count: int = 50) -> SuiteResult:
    res = SuiteResult("binning")
    for cfg in binning_configs(count):
        r1 = binning.simulate(cfg)
        r2 = binning.simulate(cfg)
        ch = cfg.channel
        rank_b = max(ch.n2, ch.m2)
        total = r1.error_probability + r1.success_probability + r1.covering_failure
        ok = (r1 == r2 and abs(total - 1.0) <= 1e-12
              and all(0.0 <= v <= 1.0 for v in (r1.error_probability, r1.covering_failure))
              and 0.0 <= r1.leakage <= min(cfg.rate, rank_b) + 1e-12)
        if cfg.rate == 0 or rank_b == 0:
            ok = ok and r1.leakage == 0.0
        if ch.m1 == 0 or ch.n1 == ch.q:
            ok = ok and r1.covering_failure == 0.0
        res.record(ok, lambda: f"{cfg}: {r1}")
    return res


SUITES = {
    "det-formulas": det_formulas,
    "entropy-oracle": entropy_oracle,
    "lemma1": cond_entropy_rank,
    "costa-gap": costa_gap,
    "thm3-gap": secrecy_gap,
    "mi-oracle": mi_oracle,
    "alpha-star": alpha_star_suite,
    "key-gap": key_gap,
    "binning": binning_invariants,
}


def run_suite(name: str, trials: int | None = None) -> list[SuiteResult]:
    """Run one suite (or ``all``); ``trials`` overrides the lemma1 pair count."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {['all', *SUITES]}")
    out = []
    for n in names:
        if n == "lemma1" and trials is not None:
            out.append(cond_entropy_rank(trials=trials))
        else:
            out.append(SUITES[n]())
    return out
