import itertools
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dpcwiretap import binning, gf2
from dpcwiretap.deterministic import DetWiretapParams as P, channel_matrices
from dpcwiretap.errors import BudgetExceededError
from dpcwiretap.pmf import JointPmf

Cfg = binning.BinningConfig


def brute_force(cfg: Cfg):
    """Reference evaluation that calls ``encode`` on every outcome."""
    cb = binning.generate_codebook(cfg)
    ch = cfg.channel
    q, n = ch.q, cfg.n
    dx = [gf2.downshift_power(q, q - g) for g in (ch.n1, ch.m1, ch.n2, ch.m2)]
    lowest = {}
    for w in range(cfg.num_bins):
        for l in range(cfg.num_subbins):
            lowest.setdefault(tuple(int(v) for v in cb.table[w, l]), w)
    errors = failures = 0
    joint = Counter()
    for w in range(cfg.num_bins):
        for r in range(cfg.num_subbins):
            for s_seq in itertools.product(range(1 << q), repeat=n):
                x = binning.encode(cb, w, s_seq, r)
                failed = x is None
                if failed:
                    x = (0,) * n
                y1 = tuple(dx[0].apply_int(xi) ^ dx[1].apply_int(si) for xi, si in zip(x, s_seq))
                y2 = tuple(dx[2].apply_int(xi) ^ dx[3].apply_int(si) for xi, si in zip(x, s_seq))
                if failed:
                    failures += 1
                elif lowest[y1] != w:
                    errors += 1
                joint[(w, y2)] += 1
    total = cfg.num_bins * cfg.num_subbins * (1 << (q * n))
    ys = sorted({k[1] for k in joint})
    table = np.zeros((cfg.num_bins, len(ys)))
    for (w, y2), c in joint.items():
        table[w, ys.index(y2)] = c / total
    mi = JointPmf(table).mutual_information([0], [1])
    return errors / total, failures / total, mi / n


SMALL = [
    Cfg(P(2, 1, 1, 1), 2, 0.5, 0.5, 3),
    Cfg(P(1, 2, 1, 0), 2, 0.5, 0.5, 1),
    Cfg(P(1, 1, 1, 1), 2, 1.0, 0.5, 4),
    Cfg(P(2, 0, 1, 0), 2, 1.0, 0.5, 0),
    Cfg(P(1, 2, 2, 1), 2, 0.5, 1.0, 8),
    Cfg(P(3, 1, 2, 2), 1, 2.0, 1.0, 2),
    Cfg(P(2, 1, 1, 1), 3, 1 / 3, 1 / 3, 5),
]


@pytest.mark.parametrize("cfg", SMALL)
def test_evaluate_matches_brute_force(cfg):
    rep = binning.simulate(cfg)
    err, fail, leak = brute_force(cfg)
    assert rep.error_probability == pytest.approx(err, abs=1e-12)
    assert rep.covering_failure == pytest.approx(fail, abs=1e-12)
    assert rep.leakage == pytest.approx(leak, abs=1e-9)


class TestCodebook:
    def test_single_codeword(self):
        cb = binning.generate_codebook(Cfg(P(2, 1, 1, 1), 3, 0.0, 0.0))
        assert cb.shape == (1, 1, 3)

    def test_shape_example(self):
        cb = binning.generate_codebook(Cfg(P(2, 0, 1, 0), 2, 1.0, 0.5))
        assert cb.shape == (4, 2, 2)
        assert int(cb.table.max()) < 4

    def test_deterministic(self):
        cfg = Cfg(P(3, 1, 2, 2), 2, 1.0, 0.5, seed=42)
        np.testing.assert_array_equal(binning.generate_codebook(cfg).table,
                                      binning.generate_codebook(cfg).table)

    @given(st.tuples(*[st.integers(0, 4)] * 4), st.integers(0, 1000))
    def test_symbols_in_y1_span(self, gains, seed):
        ch = P(*gains)
        cb = binning.generate_codebook(Cfg(ch, 2, 1.0, 0.5, seed))
        a, _ = channel_matrices(ch)
        span = set(int(v) for v in gf2.span_table(gf2.column_space_basis(a))) if ch.q else {0}
        assert set(int(v) for v in cb.table.ravel()) <= span

    def test_rate_must_be_quantised(self):
        with pytest.raises(ValueError):
            Cfg(P(1, 1, 1, 1), 3, 0.5)
        with pytest.raises(ValueError):
            Cfg(P(1, 1, 1, 1), 0, 0.0)


class TestEncode:
    def test_no_interference_picks_first_subbin(self):
        cfg = Cfg(P(2, 0, 1, 0), 2, 0.5, 1.0, seed=3)
        cb = binning.generate_codebook(cfg)
        a, _ = channel_matrices(cfg.channel)
        for r in range(cfg.num_subbins):
            x = binning.encode(cb, 1, (0, 3), r)
            assert x is not None
            l = r % cfg.num_subbins
            assert tuple(gf2.downshift_power(2, 0).apply_int(xi) for xi in x) == tuple(
                int(v) for v in cb.table[1, l])

    def test_full_image_always_feasible(self):
        cfg = Cfg(P(2, 2, 1, 1), 2, 0.5, 0.5, seed=1)
        cb = binning.generate_codebook(cfg)
        for s in itertools.product(range(4), repeat=2):
            for w in range(cfg.num_bins):
                assert binning.encode(cb, w, s, 0) is not None

    def test_infeasible_codeword(self):
        # q=2, image of D^(q-n1) has zero first coordinate; D^(q-m1) = I
        ch = P(1, 2, 0, 0)
        cfg = Cfg(ch, 1, 0.0, 0.0)
        table = np.array([[[0b01]]], dtype=np.uint64)
        cb = binning.Codebook(cfg, table, ())
        assert binning.encode(cb, 0, (0b00,), 0) is None
        assert binning.encode(cb, 0, (0b01,), 0) is not None

    def test_argument_checks(self):
        cfg = Cfg(P(1, 1, 1, 1), 2, 0.5)
        cb = binning.generate_codebook(cfg)
        with pytest.raises(ValueError):
            binning.encode(cb, 2, (0, 0), 0)
        with pytest.raises(ValueError):
            binning.encode(cb, 0, (0,), 0)


class TestEvaluate:
    def test_zero_rate_no_leakage(self):
        rep = binning.simulate(Cfg(P(2, 1, 2, 1), 3, 0.0, 1 / 3, seed=2))
        assert rep.leakage == 0.0 and rep.error_probability == 0.0

    def test_blind_eavesdropper(self):
        rep = binning.simulate(Cfg(P(2, 1, 0, 0), 3, 2 / 3, 1 / 3, seed=2))
        assert rep.leakage == 0.0

    def test_deterministic_report(self):
        cfg = Cfg(P(2, 1, 1, 1), 3, 1 / 3, 1 / 3, seed=17)
        assert binning.simulate(cfg) == binning.simulate(cfg)

    def test_budget_refusals(self):
        with pytest.raises(BudgetExceededError, match="q\\*n"):
            binning.simulate(Cfg(P(3, 1, 1, 1), 7, 0.0))
        with pytest.raises(BudgetExceededError, match="bins"):
            binning.simulate(Cfg(P(2, 1, 1, 1), 4, 0.5), budget=100)

    def test_env_budget(self, monkeypatch):
        monkeypatch.setenv("WIRETAP_DET_BUDGET", "100")
        with pytest.raises(BudgetExceededError):
            binning.simulate(Cfg(P(2, 1, 1, 1), 4, 0.5))

    @settings(max_examples=40)
    @given(st.tuples(*[st.integers(0, 3)] * 4), st.integers(1, 3), st.integers(0, 3),
           st.integers(0, 2), st.integers(0, 2**31))
    def test_invariants(self, gains, n, k, kp, seed):
        ch = P(*gains)
        if ch.q * n > 9:
            return
        cfg = Cfg(ch, n, k / n, kp / n, seed)
        rep = binning.simulate(cfg)
        for v in (rep.error_probability, rep.covering_failure, rep.success_probability):
            assert 0.0 <= v <= 1.0
        total = rep.error_probability + rep.success_probability + rep.covering_failure
        assert total == pytest.approx(1.0, abs=1e-12)
        assert 0.0 <= rep.leakage <= min(cfg.rate, max(ch.n2, ch.m2)) + 1e-12
        if ch.m1 == 0 or ch.n1 == ch.q:
            assert rep.covering_failure == 0.0
        if cfg.rate == 0 or ch.n2 == ch.m2 == 0:
            assert rep.leakage == 0.0
        # at most 2^(n n1) messages are reachable for each state sequence
        assert rep.error_probability + rep.covering_failure >= 1 - 2.0 ** (n * (ch.n1 - cfg.rate)) - 1e-12

    def test_leakage_zero_iff_independent(self):
        # the reconstructed joint pmf of (W, Y2^n) has zero MI exactly when leakage is 0
        for cfg in SMALL:
            rep = binning.simulate(cfg)
            _, _, leak = brute_force(cfg)
            assert (rep.leakage == 0.0) == (leak < 1e-12)


EQUAL_DIFF = [P(1, 1, 1, 1), P(1, 0, 2, 1), P(2, 1, 2, 1), P(1, 2, 2, 3), P(0, 1, 1, 2)]


@pytest.mark.parametrize("ch", EQUAL_DIFF)
def test_zero_capacity_channels_obey_fano(ch):
    """With Y1 a function of Y2, reliability forces leakage through Fano's inequality."""
    assert ch.n1 - ch.m1 == ch.n2 - ch.m2 and ch.n1 <= ch.n2
    n_max = max(1, min(4, binning.MAX_QN // max(ch.q, 1)))
    for n in range(1, n_max + 1):
        for k in range(1, n * max(ch.q, 1) + 1):
            for kp in range(0, 3):
                cfg = Cfg(ch, n, k / n, kp / n, seed=k * 7 + kp)
                try:
                    rep = binning.simulate(cfg, budget=1 << 18)
                except BudgetExceededError:
                    continue
                m = cfg.num_bins
                pe = min(1.0, rep.error_probability + rep.covering_failure)
                if pe > 1 - 1 / m:
                    continue
                hb = 0.0 if pe in (0.0, 1.0) else -(pe * math.log2(pe) + (1 - pe) * math.log2(1 - pe))
                bound = (n * cfg.rate - hb - pe * math.log2(m - 1)) / n if m > 1 else 0.0
                assert rep.leakage >= bound - 1e-9, (cfg, rep)
                if rep.error_probability + rep.covering_failure <= 0.1:
                    assert rep.leakage >= cfg.rate / 2, (cfg, rep)


class TestProbe:
    def test_rows_and_means(self):
        rows = binning.rate_region_probe(P(2, 1, 1, 1), 2, seeds=[0, 1], rate_confusion=0.5)
        rates = sorted({r.rate for r in rows})
        assert rates == [0.0, 0.5, 1.0, 1.5, 2.0, 2.5]
        for rate in rates:
            cell = [r for r in rows if r.rate == rate]
            assert [r.seed for r in cell] == [0, 1, None]
            assert cell[2].leakage == pytest.approx((cell[0].leakage + cell[1].leakage) / 2)
        zero = [r for r in rows if r.rate == 0.0]
        assert all(r.leakage == 0.0 and r.error == 0.0 for r in zero)

    def test_rate_above_n1_errors(self):
        ch = P(1, 0, 0, 0)
        rows = binning.rate_region_probe(ch, 3, seeds=[0, 1, 2], max_rate=2.0)
        means = {r.rate: r for r in rows if r.seed is None}
        for rate, row in means.items():
            if rate > ch.n1:
                assert row.error + row.covering_failure >= 1 - 2.0 ** (3 * (ch.n1 - rate)) - 1e-12
        assert means[2.0].error > means[4 / 3].error

    def test_stops_at_budget(self):
        rows = binning.rate_region_probe(P(2, 1, 1, 1), 3, seeds=[0], budget=1 << 8)
        assert max(r.rate for r in rows) < 2.0
