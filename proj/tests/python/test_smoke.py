"""End-to-end smoke tests for the python bindings."""

import math

import pytest

import dscdma as d


def make_codes(k):
    family = d.generate_gold_family(0o45, 0o75)
    return [d.build_signature(bits) for bits in family[:k]]


def synth(codes, amps, delays, n_bits, ns, seed=0):
    frame = d.generate_bit_frame(len(codes), n_bits, seed)
    length = d.frame_samples(n_bits, 32, ns)
    parts = []
    for k, code in enumerate(codes):
        profile = d.UserProfile(k + 1, amps[k], delays[k], code)
        parts.append(d.modulate_user(profile, frame.bits[k], ns, length))
    return frame, d.superpose(parts)


def test_gold_family_size_and_signature_energy():
    family = d.generate_gold_family(0o45, 0o75)
    assert len(family) == 33
    code = d.build_signature(family[0])
    assert code.nc == 32
    assert math.isclose(sum(c * c for c in code.chips), 1.0, abs_tol=1e-12)


def test_non_preferred_pair_rejected():
    with pytest.raises(ValueError):
        d.generate_gold_family(0o45, 0o51)


def test_noiseless_estimation_recovers_channel():
    codes = make_codes(4)
    amps = [1.0, 1.0, 1.0, 1.0]
    delays = [0, 5, 9, 20]
    _, rx = synth(codes, amps, delays, 3, 1)
    est = d.estimate_channel(rx, codes)
    assert est.delays == delays
    assert all(abs(a - 1.0) < 1e-9 for a in est.amplitudes)


def test_sic_detects_noiseless_frame():
    codes = make_codes(2)
    frame, rx = synth(codes, [1.0, 0.8], [0, 7], 30, 1, seed=5)
    est = d.ChannelEstimate([1.0, 0.8], [0, 7])
    result = d.sic_detect(rx, codes, est, 30)
    errors, rate = d.bit_error_rate(frame, result, skip_pilots=True)
    assert errors == 0 and rate == 0.0


def test_snr_to_sigma():
    assert math.isclose(d.snr_to_sigma(0.0, 1.0), 1.0)
    assert math.isclose(d.snr_to_sigma(20.0, 1.0), 0.1)


def test_sweep_rows_and_reproducibility(tmp_path):
    cfg = d.ExperimentConfig()
    cfg.trials = 8
    cfg.n_bits = 12
    cfg.snr_grid_db = [4.0, 8.0]
    cfg.detectors = [d.Detector.mf, d.Detector.sic]
    rows = d.run_sweep(cfg)
    assert len(rows) == 4
    assert d.csv_string(rows) == d.csv_string(d.run_sweep(cfg))

    out = tmp_path / "rows.csv"
    d.emit_csv(rows, str(out))
    text = out.read_text()
    assert text.startswith("snr_db,detector,channel_mode")
    assert len(text.splitlines()) == 5

    svg = tmp_path / "rows.svg"
    d.emit_plot(rows, "ber", str(svg))
    assert svg.read_text().startswith("<svg")


def test_invalid_config_rejected():
    cfg = d.ExperimentConfig()
    cfg.k_users = 99
    with pytest.raises(ValueError):
        d.validate_config(cfg)


def test_run_trial_deterministic():
    cfg = d.ExperimentConfig()
    cfg.n_bits = 10
    cfg.trials = 1
    a = d.run_trial(cfg, 8.0, 3)
    b = d.run_trial(cfg, 8.0, 3)
    assert [(m.bit_errors, m.pee) for _, m in a] == [(m.bit_errors, m.pee) for _, m in b]
