"""Polar code construction, SC and pruned-tree decoding, latency
modeling, and AWGN Monte Carlo simulation."""

from .channel import SimConfig, channel_llrs, format_csv, make_decoder, run_point, run_sweep
from .codes import (
    CONSTRUCTIONS,
    CodeSpec,
    bhattacharyya_parameters,
    build_code,
    encode,
    extract_info_bits,
    gaussian_approx_means,
    insert_info_bits,
    polar_transform,
)
from .latency import (
    default_cost_model,
    latency_report,
    load_cost_model,
    render_latency_table,
    schedule_latency,
)
from .nodes import (
    FastDecoder,
    decode_fast,
    decode_r0,
    decode_r1,
    decode_rep,
    decode_rep_spc,
    decode_spc,
)
from .sc import ScDecoder, combine, decode_sc, f_llr, g_llr, hard_decision
from .schedule import (
    MERGER_BUNDLES,
    MERGER_TAGS,
    DecodeSchedule,
    MergerConfig,
    build_schedule,
    classify,
    merger_set,
    schedule_stats,
)

__version__ = "0.1.0"

__all__ = [
    "CONSTRUCTIONS",
    "CodeSpec",
    "DecodeSchedule",
    "FastDecoder",
    "MERGER_BUNDLES",
    "MERGER_TAGS",
    "MergerConfig",
    "ScDecoder",
    "SimConfig",
    "bhattacharyya_parameters",
    "build_code",
    "build_schedule",
    "channel_llrs",
    "classify",
    "combine",
    "decode_fast",
    "decode_r0",
    "decode_r1",
    "decode_rep",
    "decode_rep_spc",
    "decode_sc",
    "decode_spc",
    "default_cost_model",
    "encode",
    "extract_info_bits",
    "f_llr",
    "format_csv",
    "g_llr",
    "gaussian_approx_means",
    "hard_decision",
    "insert_info_bits",
    "latency_report",
    "load_cost_model",
    "make_decoder",
    "merger_set",
    "polar_transform",
    "render_latency_table",
    "run_point",
    "run_sweep",
    "schedule_latency",
    "schedule_stats",
]
