import numpy as np
import pytest

from smasense import detector as D


class TestClassify:
    def test_strict_inequality_at_threshold(self):
        assert not D.classify(0.04, 0.04)

    def test_calibrated_example(self):
        assert D.classify(0.05, 0.04)

    def test_negative_estimate(self):
        assert not D.classify(-0.01, 0.04)

    def test_vectorized(self):
        out = D.classify(np.array([0.0, 0.05, 0.2]), 0.1)
        np.testing.assert_array_equal(out, [False, False, True])


class TestClassify3:
    @pytest.mark.parametrize("f,expected", [(0.05, "none"), (0.3, "contact"), (0.6, "high"),
                                            (0.1, "none"), (0.5, "contact")])
    def test_levels(self, f, expected):
        assert D.classify3(f, 0.1, 0.5) == expected

    def test_bad_thresholds(self):
        with pytest.raises(ValueError):
            D.classify3(0.2, 0.5, 0.1)


class TestConfusion:
    def test_perfect(self):
        truth = np.array([True, False, True, False])
        c = D.confusion(truth, truth)
        assert (c.fp, c.fn) == (0, 0) and c.tp == 2 and c.tn == 2

    def test_inverted(self):
        truth = np.array([True, False, True])
        c = D.confusion(~truth, truth)
        assert (c.tp, c.tn) == (0, 0)

    def test_hand_tally(self):
        pred = np.array([1, 1, 0, 0, 1, 0, 1, 0, 1, 1], dtype=bool)
        truth = np.array([1, 0, 0, 1, 1, 0, 0, 0, 1, 0], dtype=bool)
        c = D.confusion(pred, truth)
        assert (c.tp, c.fp, c.fn, c.tn) == (3, 3, 1, 3)
        assert c.total == 10

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            D.confusion(np.array([True]), np.array([True, False]))


def brute_force_prf(c: D.ConfusionCounts):
    pre = c.tp / (c.tp + c.fp) if c.tp + c.fp > 0 else 0.0
    rec = c.tp / (c.tp + c.fn) if c.tp + c.fn > 0 else 0.0
    f1 = 0.0 if pre + rec == 0 else 2 * pre * rec / (pre + rec)
    return pre, rec, f1


class TestPrecisionRecallF1:
    def test_table_row_shape(self):
        pre, rec, f1 = D.precision_recall_f1(D.ConfusionCounts(tp=76, fp=24, fn=49, tn=0))
        assert pre == pytest.approx(0.76)
        assert rec == pytest.approx(0.608, abs=1e-3)
        assert f1 == pytest.approx(0.676, abs=1e-3)

    def test_zero_convention(self):
        assert D.precision_recall_f1(D.ConfusionCounts(0, 5, 3, 2)) == (0.0, 0.0, 0.0)
        assert D.precision_recall_f1(D.ConfusionCounts(0, 0, 0, 10)) == (0.0, 0.0, 0.0)

    def test_balanced(self):
        pre, rec, f1 = D.precision_recall_f1(D.ConfusionCounts(7, 7, 7, 0))
        assert (pre, rec, f1) == (0.5, 0.5, 0.5)

    def test_against_brute_force(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            c = D.ConfusionCounts(*[int(x) for x in rng.integers(0, 50, 4)])
            assert D.precision_recall_f1(c) == pytest.approx(brute_force_prf(c))

    def test_harmonic_mean_bounds(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            c = D.ConfusionCounts(*[int(x) for x in rng.integers(0, 50, 4)])
            pre, rec, f1 = D.precision_recall_f1(c)
            assert f1 <= min(2 * pre, 2 * rec) + 1e-12
            assert f1 <= (pre + rec) + 1e-12


class TestCalibrateThreshold:
    def test_separable_stream(self):
        rng = np.random.default_rng(2)
        truth = rng.random(400) < 0.5
        scores = np.where(truth, rng.uniform(0.06, 0.2, 400), rng.uniform(0.0, 0.04, 400))
        result = D.calibrate_threshold(scores, truth)
        star = next(m for m in result.metric_curves if m.f_thresh == result.f_thresh_star)
        assert star.f1 == 1.0
        assert 0.04 <= result.f_thresh_star <= 0.06

    def test_argmax_property(self):
        rng = np.random.default_rng(3)
        truth = rng.random(300) < 0.4
        scores = rng.uniform(0, 0.2, 300) + 0.05 * truth
        result = D.calibrate_threshold(scores, truth)
        star = next(m for m in result.metric_curves if m.f_thresh == result.f_thresh_star)
        assert all(star.f1 >= m.f1 - 1e-12 for m in result.metric_curves)

    def test_single_point_grid(self):
        result = D.calibrate_threshold(np.array([0.2, 0.0]), np.array([True, False]), grid=[0.1])
        assert result.f_thresh_star == 0.1

    def test_tie_breaks_toward_larger(self):
        # all-zero truth: F1 is 0 everywhere, the largest threshold wins
        result = D.calibrate_threshold(
            np.array([0.0, 0.0]), np.array([False, False]), grid=[0.0, 0.1, 0.2]
        )
        assert result.f_thresh_star == 0.2

    def test_precision_criterion(self):
        rng = np.random.default_rng(4)
        truth = rng.random(300) < 0.4
        scores = rng.uniform(0, 0.2, 300) + 0.05 * truth
        result = D.calibrate_threshold(scores, truth, criterion="precision")
        star = next(m for m in result.metric_curves if m.f_thresh == result.f_thresh_star)
        assert all(star.precision >= m.precision - 1e-12 for m in result.metric_curves)

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            D.calibrate_threshold(np.array([0.1]), np.array([True]), grid=[])

    def test_threshold_monotonicity(self):
        # raising the threshold never adds false positives nor removes
        # false negatives
        rng = np.random.default_rng(5)
        truth = rng.random(500) < 0.5
        scores = rng.uniform(0, 0.2, 500)
        prev = None
        for t in D.default_threshold_grid():
            c = D.confusion(scores > t, truth)
            if prev is not None:
                assert c.fp <= prev.fp
                assert c.fn >= prev.fn
            prev = c


class TestSweepTmax:
    def synthetic(self, n=600, seed=6):
        # piecewise ground truth: F_ext is a clean function of (T, theta)
        # below 95 and of theta alone above; R mirrors T below 95 but
        # aliases across the two regimes above it.
        rng = np.random.default_rng(seed)
        t = rng.uniform(25, 130, n)
        theta = rng.uniform(0, 1, n)
        r = np.where(t < 95, 2.4 - 0.008 * t, 1.64 + 0.02 * (t - 95))
        f = np.clip(0.01 * np.minimum(t, 95) * theta - 0.2, 0, None)
        cols = {"t_degc": t, "r_ohm": r, "theta_rad": theta}
        return cols, f

    def test_single_bucket_when_all_cold(self):
        cols, f = self.synthetic()
        keep = cols["t_degc"] < 58
        cols = {k: v[keep] for k, v in cols.items()}
        rows, _ = D.sweep_tmax(cols, f[keep], subsets=("rtheta", "ttheta"), seed=0)
        assert not rows[0].skipped
        assert all(r.n_rows == rows[0].n_rows for r in rows if not r.skipped)

    def test_skipped_buckets_reported(self):
        cols, f = self.synthetic()
        keep = cols["t_degc"] > 100
        cols = {k: v[keep] for k, v in cols.items()}
        rows, _ = D.sweep_tmax(cols, f[keep], subsets=("rtheta", "ttheta"), seed=0)
        assert rows[0].skipped and rows[0].mae == {}

    def test_alias_moves_limit_into_band(self):
        cols, f = self.synthetic()
        rows, limit = D.sweep_tmax(cols, f, subsets=("rtheta", "ttheta"), seed=0)
        # rows above 95 alias the resistance signal, so the scan must
        # stop well short of the top of the grid (the abs-tol guard may
        # let it creep one bucket past the kink)
        assert limit is not None and limit <= 110.0
        by_t = {r.t_max: r for r in rows if not r.skipped}
        assert by_t[130.0].mae["rtheta"] > D.DIVERGENCE_RATIO * by_t[130.0].mae["ttheta"]
        assert by_t[80.0].mae["rtheta"] <= D.DIVERGENCE_RATIO * by_t[80.0].mae["ttheta"]
