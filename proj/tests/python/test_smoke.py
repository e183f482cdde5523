import math

import pytest

import cpaudit


def test_round_trip_calibrate_predict():
    ds = cpaudit.generate(n=600, k=5, concentration=2.3, seed=7)
    assert len(ds) == 600
    assert ds.num_classes() == 5
    cal, ev = cpaudit.split_dataset(ds, calibration_size=200, seed=1)
    calib = cpaudit.calibrate_dataset(cal, alpha=0.1)
    assert 0.0 < calib.tau <= 1.0
    sets = cpaudit.predict_sets(ev, calib)
    assert len(sets) == len(ev)
    assert all(len(s) >= 1 for s in sets)
    report = cpaudit.coverage_report(sets, ev, alpha=0.1)
    assert 0.8 < report["marginal"]["rate"] <= 1.0


def test_aps_score_matches_hand_value():
    assert cpaudit.aps_score([0.6, 0.3, 0.1], 1) == pytest.approx(0.9)
    assert cpaudit.aps_score([0.6, 0.3, 0.1], 0, u=0.5) == pytest.approx(0.3)


def test_calibrate_known_quantile():
    calib = cpaudit.calibrate([0.1, 0.2, 0.3, 0.4], alpha=0.5)
    assert calib.tau == pytest.approx(0.3)


def test_hoeffding_reference_value():
    assert cpaudit.hoeffding_lcb(90, 100, 0.05) == pytest.approx(
        0.7776, abs=1e-4
    )


def test_validation_error_is_value_error():
    with pytest.raises(ValueError):
        cpaudit.calibrate([], alpha=0.1)
    with pytest.raises(OSError):
        cpaudit.load_dataset("/nonexistent/file.csv")


def test_determinism():
    a = cpaudit.generate(n=100, k=3, seed=42)
    b = cpaudit.generate(n=100, k=3, seed=42)
    sa = cpaudit.score_dataset(a)
    sb = cpaudit.score_dataset(b)
    assert sa == sb


def test_pitfall_bundle_shape():
    out = cpaudit.run_pitfalls(seed=0, only="few-class-informativeness")
    body = out["pitfalls"]["few-class-informativeness"]
    assert body["verdict"] in ("PASS", "FAIL")
    assert isinstance(out["all_pass"], bool)


def test_selective_and_shift_surface():
    ds = cpaudit.generate(n=800, k=4, concentration=3.0, seed=3)
    curve = cpaudit.selective_curve(ds, delta=0.05)
    assert len(curve["points"]) > 0
    lams = [p["lambda"] for p in curve["points"]]
    assert lams == sorted(lams)
    cert = cpaudit.choose_lambda(ds, target_accuracy=0.5, delta=0.05)
    if cert is not None:
        lam, bound = cert
        assert bound >= 0.5
        assert not math.isnan(lam)
