"""Channel model and Monte Carlo harness tests."""

import numpy as np
import pytest

from polarfast.channel import (
    SimConfig,
    channel_llrs,
    format_csv,
    make_decoder,
    run_point,
    run_sweep,
)
from polarfast.codes import build_code

# P(Z > sqrt(2)) for the standard normal: uncoded BPSK BER at Es/N0 = 0 dB.
_Q_SQRT2 = 0.07864960352514257


def test_channel_llr_signs_at_high_snr():
    rng = np.random.default_rng(7)
    x = rng.integers(0, 2, size=(64, 128), dtype=np.uint8)
    llrs = channel_llrs(x, 20.0, 0.5, np.random.default_rng(8))
    assert np.array_equal((llrs < 0).astype(np.uint8), x)


def test_channel_llr_consistency():
    # For AWGN the LLR of the correct bit has variance equal to twice its
    # mean: mean 2/sigma^2, variance 4/sigma^2.
    rng = np.random.default_rng(11)
    x = np.zeros((400, 512), dtype=np.uint8)
    for ebn0_db, rate in [(0.0, 0.5), (3.0, 0.25)]:
        llrs = channel_llrs(x, ebn0_db, rate, rng)
        sigma2 = 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))
        m, v = llrs.mean(), llrs.var()
        assert m == pytest.approx(2.0 / sigma2, rel=0.02)
        assert v == pytest.approx(2.0 * m, rel=0.05)


def test_channel_rejects_bad_rate():
    with pytest.raises(ValueError):
        channel_llrs(np.zeros(8, dtype=np.uint8), 1.0, 0.0, np.random.default_rng(0))


def test_uncoded_ber_matches_q_function():
    # Rate 1 so Eb/N0 = Es/N0; 0 dB gives BER Q(sqrt(2)).
    rng = np.random.default_rng(1234)
    n_bits = 100000
    x = rng.integers(0, 2, size=n_bits, dtype=np.uint8)
    llrs = channel_llrs(x, 0.0, 1.0, rng)
    ber = np.mean((llrs < 0).astype(np.uint8) != x)
    sigma = np.sqrt(_Q_SQRT2 * (1 - _Q_SQRT2) / n_bits)
    assert abs(ber - _Q_SQRT2) < 3 * sigma


def test_config_validation():
    code = build_code(8, 4)
    with pytest.raises(ValueError):
        SimConfig(code, decoder="list")
    with pytest.raises(ValueError):
        SimConfig(code, max_frames=0)
    with pytest.raises(ValueError):
        SimConfig(code, snr_points=())
    with pytest.raises(ValueError):
        SimConfig(code, seed=-1)


def test_config_default_names():
    code = build_code(8, 4)
    assert SimConfig(code).name == "fast-ssc"
    assert SimConfig(code, mergers="all").name == "all"
    assert SimConfig(code, decoder="sc").name == "sc"
    assert SimConfig(code, name="mine").name == "mine"


def test_run_point_reproducible():
    code = build_code(128, 64)
    cfg = SimConfig(code, seed=42, max_frames=4096, max_frame_errors=10**9)
    a = run_point(cfg, 2.0, 0)
    b = run_point(cfg, 2.0, 0)
    assert a == b
    assert a["frames"] == 4096
    assert a["ber"] == a["bit_errors"] / (4096 * 64)
    assert a["fer"] == a["frame_errors"] / 4096


def test_run_point_distinct_streams_per_index():
    code = build_code(128, 64)
    cfg = SimConfig(code, seed=42, max_frames=2048, max_frame_errors=10**9)
    a = run_point(cfg, 2.0, 0)
    b = run_point(cfg, 2.0, 1)
    assert a["bit_errors"] != b["bit_errors"]


def test_run_point_noiseless():
    code = build_code(64, 32)
    cfg = SimConfig(code, seed=5, max_frames=256, noiseless=True)
    res = run_point(cfg, 0.0, 0)
    assert res["bit_errors"] == 0
    assert res["frame_errors"] == 0
    assert res["frames"] == 256


def test_run_point_respects_frame_cap():
    code = build_code(64, 32)
    cfg = SimConfig(code, seed=5, max_frames=100, max_frame_errors=10**9)
    res = run_point(cfg, 2.0, 0)
    assert res["frames"] == 100


def test_run_point_stops_after_enough_errors():
    code = build_code(128, 64)
    cfg = SimConfig(code, seed=5, max_frames=10**5, max_frame_errors=5)
    res = run_point(cfg, 0.0, 0)
    assert res["frame_errors"] >= 5
    assert res["frames"] == 2048  # one full batch at this error rate


def test_sc_and_plain_fast_agree_on_counts():
    code = build_code(64, 32)
    kw = dict(seed=9, snr_points=(1.0, 2.0), max_frames=1024, max_frame_errors=10**9)
    sc_rows = run_sweep(SimConfig(code, decoder="sc", **kw))
    fa_rows = run_sweep(SimConfig(code, mergers="none", **kw))
    for a, b in zip(sc_rows, fa_rows):
        assert a["bit_errors"] == b["bit_errors"]
        assert a["frame_errors"] == b["frame_errors"]


def test_lossless_pairs_with_fast_ssc():
    code = build_code(128, 64)
    kw = dict(seed=77, snr_points=(2.0,), max_frames=2048, max_frame_errors=10**9)
    a = run_sweep(SimConfig(code, mergers="fast-ssc", **kw))
    b = run_sweep(SimConfig(code, mergers="lossless", **kw))
    assert a[0]["bit_errors"] == b[0]["bit_errors"]
    assert a[0]["frame_errors"] == b[0]["frame_errors"]


def test_sweep_threads_do_not_change_rows():
    code = build_code(128, 64)
    cfg = SimConfig(code, seed=3, snr_points=(1.0, 2.0, 3.0), max_frames=2048)
    assert run_sweep(cfg, threads=1) == run_sweep(cfg, threads=4)


def test_sweep_fer_trend():
    code = build_code(128, 64)
    cfg = SimConfig(code, seed=21, snr_points=(0.0, 2.0, 4.0), max_frames=4096,
                    max_frame_errors=10**9)
    rows = run_sweep(cfg)
    fers = [r["fer"] for r in rows]
    assert fers[0] > fers[1] > fers[2]


def test_csv_layout():
    rows = [
        {
            "config_name": "fast-ssc",
            "N": 128,
            "K": 64,
            "ebn0_db": 2.0,
            "frames": 1000,
            "bit_errors": 37,
            "frame_errors": 5,
            "ber": 37 / 64000,
            "fer": 0.005,
            "seed": 42,
        }
    ]
    text = format_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "config_name,N,K,ebn0_db,frames,bit_errors,frame_errors,ber,fer,seed"
    assert lines[1] == f"fast-ssc,128,64,2.0,1000,37,5,{37 / 64000},0.005,42"


def test_make_decoder_honors_rule():
    code = build_code(16, 8)
    dec = make_decoder(SimConfig(code, decoder="fast", mergers="none", rule="exact"))
    ref = make_decoder(SimConfig(code, decoder="sc", rule="exact"))
    rng = np.random.default_rng(2)
    llrs = rng.normal(size=(200, 16))
    assert np.array_equal(dec.decode(llrs)[0], ref.decode(llrs)[0])
