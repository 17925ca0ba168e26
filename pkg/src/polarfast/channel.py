"""BPSK/AWGN channel and seeded Monte Carlo BER/FER sweeps.

Every SNR point draws from its own generator seeded by (seed, point
index), so results are identical no matter how points are scheduled
across threads, and two configurations sharing a seed see the same
frames and noise (paired comparisons).  Frames run in fixed-size
batches; early stopping applies after whole batches so counts stay
reproducible.
"""

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .codes import polar_transform
from .nodes import FastDecoder
from .sc import ScDecoder
from .schedule import MergerConfig, build_schedule

_BATCH = 2048
_NOISELESS_LLR = 64.0

CSV_HEADER = "config_name,N,K,ebn0_db,frames,bit_errors,frame_errors,ber,fer,seed"


def channel_llrs(x, ebn0_db, rate, rng):
    """BPSK-modulate codeword bits over AWGN and return channel LLRs.

    Noise variance is sigma^2 = 1/(2 R Eb/N0); LLR_i = 2 y_i / sigma^2.

    Parameters
    ----------
    x : array_like of bits, shape (..., N)
    ebn0_db : float
    rate : float
        Code rate K/N used to convert Eb/N0 to Es/N0.
    rng : numpy.random.Generator
    """
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    sigma2 = 1.0 / (2.0 * rate * ebn0)
    x = np.asarray(x)
    y = (1.0 - 2.0 * x) + np.sqrt(sigma2) * rng.standard_normal(x.shape)
    return 2.0 * y / sigma2


@dataclass
class SimConfig:
    """One decoder configuration swept over SNR points."""

    code: object
    decoder: str = "fast"
    mergers: object = "fast-ssc"
    rule: str = "minsum"
    snr_points: tuple = (0.0, 1.0, 2.0, 3.0, 4.0)
    max_frames: int = 100000
    max_frame_errors: int = 100
    seed: int = 1
    name: str = None
    noiseless: bool = False
    min_node_size: int = 1

    def __post_init__(self):
        if self.decoder not in ("sc", "fast"):
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if self.max_frames < 1:
            raise ValueError("max_frames must be >= 1")
        if not len(tuple(self.snr_points)):
            raise ValueError("need at least one SNR point")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.name is None:
            if self.decoder == "sc":
                self.name = "sc"
            elif isinstance(self.mergers, str):
                self.name = self.mergers
            else:
                self.name = "fast"


def make_decoder(cfg):
    """Decoder instance for a configuration; safe to share across threads."""
    if cfg.decoder == "sc":
        return ScDecoder(cfg.code, f_method=cfg.rule)
    sched = build_schedule(cfg.code, MergerConfig(cfg.mergers, cfg.min_node_size))
    return FastDecoder(cfg.code, sched, rule=cfg.rule)


def run_point(cfg, ebn0_db, point_index, decoder=None):
    """Monte Carlo counts for one SNR point.

    Returns
    -------
    dict with ebn0_db, frames, bit_errors, frame_errors, ber, fer.
    """
    if decoder is None:
        decoder = make_decoder(cfg)
    code = cfg.code
    rng = np.random.default_rng([cfg.seed, point_index])
    frames = bit_errors = frame_errors = 0
    while frames < cfg.max_frames and frame_errors < cfg.max_frame_errors:
        b = min(_BATCH, cfg.max_frames - frames)
        info = rng.integers(0, 2, size=(b, code.K), dtype=np.uint8)
        full = np.zeros((b, code.N), dtype=np.uint8)
        full[:, code.info_positions] = info
        x = polar_transform(full)
        if cfg.noiseless:
            llrs = _NOISELESS_LLR * (1.0 - 2.0 * x)
        else:
            llrs = channel_llrs(x, ebn0_db, code.rate, rng)
        got, _ = decoder.decode(llrs)
        wrong = got != info
        bit_errors += int(wrong.sum())
        frame_errors += int(wrong.any(axis=1).sum())
        frames += b
    ber = bit_errors / (frames * code.K) if code.K else 0.0
    return {
        "ebn0_db": float(ebn0_db),
        "frames": frames,
        "bit_errors": bit_errors,
        "frame_errors": frame_errors,
        "ber": ber,
        "fer": frame_errors / frames,
    }


def run_sweep(cfg, threads=None):
    """All SNR points of a configuration; points may run concurrently.

    Returns a list of CSV-ready row dicts, one per point, in SNR order.
    """
    decoder = make_decoder(cfg)
    points = [float(s) for s in cfg.snr_points]
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(lambda ix: run_point(cfg, ix[1], ix[0], decoder), enumerate(points))
            )
    else:
        results = [run_point(cfg, s, i, decoder) for i, s in enumerate(points)]
    rows = []
    for res in results:
        rows.append(
            {
                "config_name": cfg.name,
                "N": cfg.code.N,
                "K": cfg.code.K,
                **res,
                "seed": cfg.seed,
            }
        )
    return rows


def format_csv(rows):
    """Render result rows as CSV text with the mandatory header."""
    cols = CSV_HEADER.split(",")
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for row in rows:
        out.write(",".join(str(row[c]) for c in cols) + "\n")
    return out.getvalue()


def write_csv(rows, fh):
    """Write rows to an open text file object."""
    fh.write(format_csv(rows))
