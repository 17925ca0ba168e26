"""End-to-end acceptance checks.

Each criterion prints a single PASS/FAIL line; run them with

    pytest tests/test_acceptance.py -v -s

Criterion 3 uses the Bhattacharyya construction with erasure
probability 0.3, which reproduces the reference step counts; the
library default (0.5) matches the two N=128 codes exactly as well.
"""

import time

import numpy as np

from polarfast.channel import SimConfig, channel_llrs, run_sweep
from polarfast.cli import main
from polarfast.codes import build_code, polar_transform
from polarfast.latency import latency_report
from polarfast.nodes import FastDecoder, decode_rep, decode_spc
from polarfast.sc import ScDecoder

EQUIV_CODES = [(8, 4), (128, 64), (128, 32), (512, 256), (512, 128)]
PAIRED_FRAMES = 100000
_Q_SQRT2 = 0.07864960352514257


def _verdict(ok, label, detail):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, f"{label}: {detail}"


def _paired_mismatches(code, dec_a, dec_b, seed, batch=8192):
    rng = np.random.default_rng(seed)
    bad = 0
    done = 0
    while done < PAIRED_FRAMES:
        b = min(batch, PAIRED_FRAMES - done)
        info = rng.integers(0, 2, size=(b, code.K), dtype=np.uint8)
        full = np.zeros((b, code.N), dtype=np.uint8)
        full[:, code.info_positions] = info
        x = polar_transform(full)
        llrs = channel_llrs(x, 2.0, code.rate, rng)
        ia, xa = dec_a.decode(llrs)
        ib, xb = dec_b.decode(llrs)
        bad += int(((ia != ib).any(axis=1) | (xa != xb).any(axis=1)).sum())
        done += b
    return bad


def test_criterion_1_sc_fast_ssc_equivalence():
    start = time.perf_counter()
    bad = {}
    for N, K in EQUIV_CODES:
        code = build_code(N, K)
        bad[(N, K)] = _paired_mismatches(
            code, ScDecoder(code), FastDecoder(code), seed=20001 + N + K
        )
    elapsed = time.perf_counter() - start
    total = sum(bad.values())
    ok = total == 0 and elapsed < 120
    _verdict(ok, "criterion 1 (SC vs fast-SSC bit-exact)",
             f"{PAIRED_FRAMES} paired frames/code at 2 dB, mismatched frames "
             f"{bad}, {elapsed:.1f}s")


def test_criterion_2_lossless_merger_equivalence():
    from polarfast.schedule import build_schedule

    start = time.perf_counter()
    bad = {}
    for N, K in EQUIV_CODES:
        code = build_code(N, K)
        fast = FastDecoder(code, build_schedule(code, "fast-ssc"))
        loss = FastDecoder(code, build_schedule(code, "lossless"))
        bad[(N, K)] = _paired_mismatches(code, fast, loss, seed=30001 + N + K)
    elapsed = time.perf_counter() - start
    total = sum(bad.values())
    ok = total == 0 and elapsed < 120
    _verdict(ok, "criterion 2 (lossless mergers bit-exact)",
             f"{PAIRED_FRAMES} paired frames/code at 2 dB, mismatched frames "
             f"{bad}, {elapsed:.1f}s")


def test_criterion_3_latency_table():
    targets = {
        (128, 64): (55, 49, 42),
        (128, 32): (50, 50, 41),
        (512, 256): (167, 145, 130),
        (512, 128): (165, 145, 120),
    }
    lines = []
    ok = True
    for (N, K), want in targets.items():
        code = build_code(N, K, "bhattacharyya", 0.3)
        report = latency_report(code, ["fast-ssc", "lossless", "all"])
        got = tuple(r["steps"] for r in report["rows"])
        ordered = got[2] <= got[1] <= got[0]
        within = all(abs(g - w) <= 0.15 * w for g, w in zip(got, want))
        ok = ok and ordered and within
        lines.append(f"({N},{K}) {got} vs {want}")
        if (N, K) == (128, 32):
            zero_red = report["rows"][1]["reduction_pct"] == 0
            ok = ok and zero_red
            lines[-1] += f", lossless reduction {report['rows'][1]['reduction_pct']}%"
    _verdict(ok, "criterion 3 (reference step counts, bhattacharyya eps=0.3)",
             "; ".join(lines))


def _ml_reference(codebook, alpha):
    hard = alpha < 0
    mismatch = codebook[None, :, :] != hard[:, None, :]
    penalty = (np.abs(alpha)[:, None, :] * mismatch).sum(axis=-1)
    return codebook[penalty.argmin(axis=1)]


def test_criterion_4_node_ml_oracles():
    rng = np.random.default_rng(404)
    fails = []
    for n in (4, 8):
        alpha = rng.standard_normal((10000, n)) * 2.0
        words = ((np.arange(2 ** n)[:, None] >> np.arange(n)) & 1).astype(np.uint8)
        spc_book = words[words.sum(axis=1) % 2 == 0]
        rep_book = np.stack([np.zeros(n, np.uint8), np.ones(n, np.uint8)])
        spc_bad = int((decode_spc(alpha) != _ml_reference(spc_book, alpha)).any(1).sum())
        rep_bad = int((decode_rep(alpha) != _ml_reference(rep_book, alpha)).any(1).sum())
        fails.append((n, spc_bad, rep_bad))
    ok = all(s == 0 and r == 0 for _, s, r in fails)
    _verdict(ok, "criterion 4 (SPC/REP match exhaustive ML)",
             f"10000 vectors each, (size, spc, rep) mismatches {fails}")


def _fer_crossing(rows, target_log10=-2.0):
    snr = np.array([r["ebn0_db"] for r in rows])
    lf = np.array([np.log10(r["fer"]) for r in rows])
    if target_log10 < lf[-1]:
        slope = (lf[-1] - lf[-2]) / (snr[-1] - snr[-2])
        return snr[-1] + (target_log10 - lf[-1]) / slope
    return float(np.interp(target_log10, lf[::-1], snr[::-1]))


def test_criterion_5_lossy_degradation_bound():
    start = time.perf_counter()
    code = build_code(128, 64)
    crossings = {}
    counts = {}
    for mergers in ("fast-ssc", "all"):
        cfg = SimConfig(code, mergers=mergers, snr_points=(1.0, 2.0, 3.0),
                        max_frames=10 ** 6, max_frame_errors=200, seed=505)
        rows = run_sweep(cfg)
        counts[mergers] = min(r["frame_errors"] for r in rows)
        crossings[mergers] = _fer_crossing(rows)
    elapsed = time.perf_counter() - start
    gap = crossings["all"] - crossings["fast-ssc"]
    ok = gap <= 0.5 and all(c >= 200 for c in counts.values()) and elapsed < 600
    _verdict(ok, "criterion 5 (lossy FER gap at 1e-2)",
             f"fast-ssc {crossings['fast-ssc']:.2f} dB, all "
             f"{crossings['all']:.2f} dB, gap {gap:.3f} dB "
             f"(>= {min(counts.values())} frame errors/point, {elapsed:.1f}s)")


def test_criterion_6_channel_self_check():
    rng = np.random.default_rng(606)
    n_bits = 10 ** 6
    x = rng.integers(0, 2, size=n_bits, dtype=np.uint8)
    llrs = channel_llrs(x, 0.0, 1.0, rng)
    ber = float(np.mean((llrs < 0).astype(np.uint8) != x))
    sigma = np.sqrt(_Q_SQRT2 * (1 - _Q_SQRT2) / n_bits)
    dev = abs(ber - _Q_SQRT2) / sigma
    ok = dev < 3.0
    _verdict(ok, "criterion 6 (raw BER vs Q(sqrt 2))",
             f"ber {ber:.6f} vs {_Q_SQRT2:.6f}, {dev:.2f} binomial sigma over "
             f"{n_bits} bits")


def test_criterion_7_determinism(tmp_path):
    argv = ["simulate", "--N", "128", "--k", "64", "--snr", "1:1:3",
            "--seed", "9", "--max-frames", "2048", "--no-plot"]
    paths = [tmp_path / f"run{i}.csv" for i in range(3)]
    assert main(argv + ["--out", str(paths[0])]) == 0
    assert main(argv + ["--out", str(paths[1])]) == 0
    assert main(argv + ["--out", str(paths[2]), "--threads", "4"]) == 0
    data = [p.read_bytes() for p in paths]
    ok = data[0] == data[1] == data[2] and len(data[0]) > 0
    _verdict(ok, "criterion 7 (byte-identical CSV, thread count independent)",
             f"{len(data[0])} bytes, rerun and --threads 4 both identical: "
             f"{data[0] == data[1]}, {data[0] == data[2]}")
