"""Pruned-tree classification and decode-schedule construction.

A subtree is summarized by its construction pattern slice ('0' frozen,
'1' information).  ``classify`` names the most specific structure the
slice matches; ``build_schedule`` walks the tree top-down, emitting a
NODE step wherever an enabled structure matches and F/G/COMBINE steps
plus recursion everywhere else.
"""

from collections import namedtuple

import numpy as np

R0 = "R0"
R1 = "R1"
REP = "REP"
SPC = "SPC"
REP_SPC = "REP-SPC"
R0TSPC = "R0tSPC"
R0T1REPSPC = "R0t1REPSPC"
REPTSPC = "REPtSPC"
REPTR1 = "REPtR1"
REPSPCT = "REPSPCt"
REPSPCR1T1 = "REPSPCR1t1"
REPR1T = "REPR1t"
GENERIC = "GENERIC"

SINGLE_LEVEL_KINDS = (R0, R1, REP, SPC, REP_SPC)
MULTI_LEVEL_KINDS = (R0TSPC, R0T1REPSPC, REPTSPC, REPTR1, REPSPCT, REPSPCR1T1, REPR1T)
ALL_KINDS = MULTI_LEVEL_KINDS + SINGLE_LEVEL_KINDS + (GENERIC,)
MERGER_TAGS = frozenset(MULTI_LEVEL_KINDS + SINGLE_LEVEL_KINDS)

MERGER_BUNDLES = {
    "none": frozenset(),
    "fast-ssc": frozenset({R0, R1, REP, SPC}),
    "lossless": frozenset({R0, R1, REP, SPC, R0TSPC, R0T1REPSPC, REPR1T}),
    "all": frozenset({R0, R1, REP, SPC, R0TSPC, R0T1REPSPC, REPR1T,
                      REPTSPC, REPTR1, REPSPCT, REPSPCR1T1}),
}

ScheduleStep = namedtuple("ScheduleStep", ["op", "level", "offset", "kind", "t"])
ScheduleStep.__new__.__defaults__ = (None, 0)


def merger_set(spec):
    """Resolve a merger selection to a frozenset of tags.

    Accepts a bundle name ("none", "fast-ssc", "lossless", "all"), a
    comma-separated string of tags, an iterable of tags, or an existing
    frozenset.
    """
    if spec is None:
        return MERGER_BUNDLES["fast-ssc"]
    if isinstance(spec, str):
        names = [p.strip() for p in spec.split(",") if p.strip()]
    else:
        names = list(spec)
    tags = set()
    bad = []
    for n in names:
        if n in MERGER_BUNDLES:
            tags |= MERGER_BUNDLES[n]
        elif n in MERGER_TAGS:
            tags.add(n)
        else:
            bad.append(n)
    if bad:
        raise ValueError(f"unknown merger tag(s) {bad}; known: {sorted(MERGER_TAGS)} or bundle {sorted(MERGER_BUNDLES)}")
    return frozenset(tags)


class MergerConfig:
    """Enabled merger tags plus the smallest span eligible for pruning."""

    def __init__(self, enabled="fast-ssc", min_node_size=1, name=None):
        if name is None:
            name = enabled if isinstance(enabled, str) else "custom"
        self.enabled = merger_set(enabled)
        self.min_node_size = int(min_node_size)
        self.name = name
        if self.min_node_size < 1:
            raise ValueError(f"min_node_size must be >= 1, got {min_node_size}")

    def __repr__(self):
        return f"MergerConfig({sorted(self.enabled)}, min_node_size={self.min_node_size})"


def _is_r0(s):
    return s.size >= 1 and not s.any()


def _is_r1(s):
    return s.size >= 1 and bool(s.all())


def _is_rep(s):
    return s.size >= 2 and s[-1] == 1 and not s[:-1].any()


def _is_spc(s):
    return s.size >= 2 and s[0] == 0 and bool(s[1:].all())


def _is_rep_spc(s):
    return s.size == 8 and _is_rep(s[:4]) and _is_spc(s[4:])


def _match_r0tspc(s, L):
    # zeros feeding a single parity tail of span >= 4
    for l0 in range(2, L):
        tail = 1 << l0
        if _is_spc(s[-tail:]) and not s[:-tail].any():
            return L - l0
    return None


def _match_r0t1repspc(s, L):
    if L >= 4 and _is_rep_spc(s[-8:]) and not s[:-8].any():
        return L - 2
    return None


def _match_rep_chain(s, L, tail_check):
    # repetition blocks halving from span/2 down to the tail span
    for t in range(2, L - 1):
        l0 = L - t
        pos = 0
        ok = True
        for m in range(L - 1, l0 - 1, -1):
            blk = 1 << m
            if not _is_rep(s[pos:pos + blk]):
                ok = False
                break
            pos += blk
        if ok and tail_check(s[pos:]):
            return t
    return None


def _match_ascending(s, L, sib_check, upper_check):
    # small repetition block, its sibling, then doubling upper blocks
    for l0 in range(2, L - 1):
        b = 1 << l0
        if not _is_rep(s[:b]):
            continue
        # the repetition span is fixed by the position of the first 1
        if not sib_check(s[b:2 * b]):
            return None
        for m in range(l0 + 1, L):
            if not upper_check(s[1 << m:1 << (m + 1)]):
                return None
        return L - l0
    return None


_MULTI_MATCHERS = (
    (R0TSPC, _match_r0tspc),
    (R0T1REPSPC, _match_r0t1repspc),
    (REPTSPC, lambda s, L: _match_rep_chain(s, L, _is_spc)),
    (REPTR1, lambda s, L: _match_rep_chain(s, L, _is_r1)),
    (REPSPCT, lambda s, L: _match_ascending(s, L, _is_spc, _is_spc)),
    (REPSPCR1T1, lambda s, L: _match_ascending(s, L, _is_spc, _is_r1)),
    (REPR1T, lambda s, L: _match_ascending(s, L, _is_r1, _is_r1)),
)

_SINGLE_MATCHERS = (
    (REP_SPC, _is_rep_spc),
    (R0, _is_r0),
    (R1, _is_r1),
    (REP, _is_rep),
    (SPC, _is_spc),
)


def _as_bits(pattern):
    if isinstance(pattern, str):
        pattern = [int(c) for c in pattern]
    s = np.asarray(pattern, dtype=np.uint8)
    if s.ndim != 1 or s.size < 1 or (s.size & (s.size - 1)) != 0:
        raise ValueError(f"pattern length must be a power of two, got shape {s.shape}")
    if not np.isin(s, (0, 1)).all():
        raise ValueError("pattern must contain only 0s and 1s")
    return s


def classify(pattern):
    """Name the most specific structure matching a pattern slice.

    Parameters
    ----------
    pattern : str or array_like
        0/1 slice of a construction pattern; length a power of two.

    Returns
    -------
    (kind, t) : (str, int)
        Structure tag and merger depth (0 for single-level kinds);
        ("GENERIC", 0) when nothing matches and the node must split.
    """
    s = _as_bits(pattern)
    L = s.size.bit_length() - 1
    for kind, match in _MULTI_MATCHERS:
        t = match(s, L)
        if t is not None:
            return kind, t
    for kind, match in _SINGLE_MATCHERS:
        if match(s):
            return kind, 0
    return GENERIC, 0


def _best_enabled(s, L, enabled):
    # like classify, but skipping disabled tags so a lower-priority
    # enabled structure can still prune the span
    for kind, match in _MULTI_MATCHERS:
        if kind in enabled:
            t = match(s, L)
            if t is not None:
                return kind, t
    for kind, match in _SINGLE_MATCHERS:
        if kind in enabled and match(s):
            return kind, 0
    return None


class DecodeSchedule:
    """Ordered decoding steps for one code under one merger selection."""

    def __init__(self, code, steps, enabled, min_node_size=1, name="custom"):
        self.code = code
        self.steps = tuple(steps)
        self.enabled = frozenset(enabled)
        self.min_node_size = min_node_size
        self.name = name

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def to_json_dict(self):
        return {
            "N": self.code.N,
            "K": self.code.K,
            "mergers": sorted(self.enabled),
            "min_node_size": self.min_node_size,
            "steps": [
                {"op": s.op, "level": s.level, "offset": s.offset, "kind": s.kind, "t": s.t}
                for s in self.steps
            ],
        }


def build_schedule(code, mergers="fast-ssc", min_node_size=1):
    """Prune the decoding tree of a code under a merger selection.

    Parameters
    ----------
    code : CodeSpec
    mergers : str, iterable, or MergerConfig
        Bundle name, tag list, or full config.
    min_node_size : int
        Smallest span a non-leaf NODE step may cover; spans below it
        always split (leaves are exempt).

    Returns
    -------
    DecodeSchedule
    """
    if isinstance(mergers, MergerConfig):
        cfg = mergers
    else:
        cfg = MergerConfig(mergers, min_node_size)
    enabled = cfg.enabled
    info = (~code.frozen_mask).astype(np.uint8)
    steps = []

    def walk(level, offset):
        size = 1 << level
        s = info[offset:offset + size]
        if level == 0:
            if s[0]:
                kind = R1 if R1 in enabled else GENERIC
            else:
                kind = R0 if R0 in enabled else GENERIC
            steps.append(ScheduleStep("NODE", 0, offset, kind, 0))
            return
        if size >= cfg.min_node_size:
            hit = _best_enabled(s, level, enabled)
            if hit is not None:
                steps.append(ScheduleStep("NODE", level, offset, hit[0], hit[1]))
                return
        steps.append(ScheduleStep("F", level, offset))
        walk(level - 1, offset)
        steps.append(ScheduleStep("G", level, offset))
        walk(level - 1, offset + size // 2)
        steps.append(ScheduleStep("COMBINE", level, offset))

    walk(code.n, 0)
    return DecodeSchedule(code, steps, enabled, cfg.min_node_size, cfg.name)


def schedule_stats(sched):
    """Count schedule steps by operation and NODE structure tag.

    Returns
    -------
    dict
        {"ops": {"F", "G", "COMBINE"}, "nodes": {tag: count} over all
        tags, "num_steps": total, "node_span_total": leaves covered}.
    """
    ops = {"F": 0, "G": 0, "COMBINE": 0}
    nodes = {kind: 0 for kind in ALL_KINDS}
    span = 0
    for step in sched.steps:
        if step.op == "NODE":
            nodes[step.kind] += 1
            span += 1 << step.level
        else:
            ops[step.op] += 1
    return {"ops": ops, "nodes": nodes, "num_steps": len(sched.steps), "node_span_total": span}
