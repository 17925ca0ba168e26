"""Decoders for pruned subtrees and the schedule executor.

Single-structure decoders (all-frozen, all-information, repetition,
single-parity, and the paired repetition/parity span) reproduce the
sequential tree decisions in one shot.  The multi-level decoders
collapse whole pattern stacks:

* ``decode_group_a``: frozen levels feeding one bottom decoder; partial
  sums above the bottom are zero, so the bottom input is a plain block
  sum and the result tiles across the span.  Lossless.
* ``decode_group_b``: repetition chain feeding a parity or rate-one
  tail; all chain bits are thresholded in parallel from sign-free
  partial sums (an approximation), re-encoded into per-row signs, and
  the tail is decoded from the signed aggregate.
* ``decode_group_c``: one bottom repetition block with parity or
  rate-one siblings ascending; the parity variants estimate every
  partial sum in parallel from leave-one-out combinations, repair
  per-column parity against the repetition bit, then project onto the
  local code; the rate-one variant replays the subtree exactly.

All decoders broadcast over leading batch axes.

Layout note: a span of length 2**L is viewed as a (2**t, 2**l0) grid in
row-major order, rows being the merged levels.  Sums over spans fold
halves pairwise so float addition associates exactly as in the
sequential tree descent.
"""

import numpy as np

from .codes import CodeSpec, polar_transform
from .sc import ScDecoder, f_llr, g_llr, hard_decision
from .schedule import (
    GENERIC,
    R0,
    R0T1REPSPC,
    R0TSPC,
    R1,
    REP,
    REP_SPC,
    REPR1T,
    REPSPCR1T1,
    REPSPCT,
    REPTR1,
    REPTSPC,
    SPC,
    build_schedule,
)


def _halving_sum(a):
    # fold halves pairwise; matches the order of chained right descents
    while a.shape[-1] > 1:
        h = a.shape[-1] // 2
        a = a[..., :h] + a[..., h:]
    return a[..., 0]


def _level_of(size):
    if size < 1 or (size & (size - 1)) != 0:
        raise ValueError(f"span must be a power of two, got {size}")
    return size.bit_length() - 1


def decode_r0(length):
    """All-frozen span: zeros, independent of any input."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    return np.zeros(length, dtype=np.uint8)


def decode_r1(alpha):
    """All-information span: elementwise hard decision."""
    return hard_decision(alpha)


def decode_rep(alpha):
    """Repetition span: one bit from the LLR sum, broadcast."""
    a = np.asarray(alpha, dtype=np.float64)
    bit = hard_decision(_halving_sum(a))
    return np.broadcast_to(bit[..., None], a.shape).astype(np.uint8).copy()


def decode_spc(alpha):
    """Single-parity span: hard decisions with a least-reliable repair.

    If the hard decisions have odd parity, the position with the
    smallest LLR magnitude is flipped (lowest index on ties).
    """
    a = np.asarray(alpha, dtype=np.float64)
    if a.shape[-1] < 2:
        raise ValueError(f"parity span needs length >= 2, got {a.shape[-1]}")
    bits = hard_decision(a)
    parity = np.bitwise_xor.reduce(bits, axis=-1)
    j = np.abs(a).argmin(axis=-1)
    flat = bits.reshape(-1, a.shape[-1])
    rows = np.flatnonzero(parity.reshape(-1))
    flat[rows, j.reshape(-1)[rows]] ^= 1
    return flat.reshape(a.shape).astype(np.uint8)


def decode_rep_spc(alpha, rule="minsum"):
    """Paired repetition/parity span of length 8.

    Decides the repetition bit first, then decodes the parity half under
    that hypothesis; output equals running the two nodes sequentially.
    """
    a = np.asarray(alpha, dtype=np.float64)
    if a.shape[-1] != 8:
        raise ValueError(f"expected span 8, got {a.shape[-1]}")
    left, right = a[..., :4], a[..., 4:]
    c = f_llr(left, right, rule)
    q = hard_decision(_halving_sum(c))
    r = g_llr(left, right, q[..., None])
    spc = decode_spc(r)
    return np.concatenate([spc ^ q[..., None], spc], axis=-1)


def decode_group_a(kind, alpha, t, rule="minsum"):
    """Frozen levels feeding one bottom decoder; lossless.

    Parameters
    ----------
    kind : str
        "R0tSPC" (parity bottom) or "R0t1REPSPC" (paired bottom).
    alpha : array_like
        Shape (..., 2**L) LLRs.
    t : int
        Number of merged levels, >= 1.
    """
    a = np.asarray(alpha, dtype=np.float64)
    L = _level_of(a.shape[-1])
    if t < 1:
        raise ValueError(f"depth must be >= 1, got {t}")
    if kind == R0TSPC:
        folds = t
        if L - folds < 1:
            raise ValueError(f"depth {t} leaves no parity span at length {a.shape[-1]}")
    elif kind == R0T1REPSPC:
        folds = t - 1
        if L - folds != 3:
            raise ValueError(f"depth {t} does not leave a span of 8 at length {a.shape[-1]}")
    else:
        raise ValueError(f"unknown kind {kind!r}")
    for _ in range(folds):
        h = a.shape[-1] // 2
        a = a[..., :h] + a[..., h:]
    bottom = decode_spc(a) if kind == R0TSPC else decode_rep_spc(a, rule)
    return np.tile(bottom, (1,) * (bottom.ndim - 1) + (1 << folds,))


def _chain_qvec_index(t, step):
    # the chain bit decided at `step` (0 = widest block) lands at this
    # message position of the depth-t transform
    m = t - 1 - step
    return (1 << t) - (1 << m) - 1


def decode_group_b(kind, alpha, t, rule="minsum"):
    """Repetition chain into a parity or rate-one tail.

    Every chain bit is thresholded in parallel from root LLRs alone:
    the XOR of codeword positions half a block apart equals that bit,
    so pairwise boxplus at the bit's stride summed over the span gives
    its repetition estimate with no dependence on the other bits.  The
    decisions are re-encoded through the depth-t transform into per-row
    signs and the tail is decoded on the signed row aggregate.  The
    parallel estimates skip the sequential partial-sum corrections, so
    this is an approximation of the exact descent (it coincides on
    noiseless input).
    """
    a = np.asarray(alpha, dtype=np.float64)
    L = _level_of(a.shape[-1])
    if kind not in (REPTSPC, REPTR1):
        raise ValueError(f"unknown kind {kind!r}")
    if t < 2:
        raise ValueError(f"depth must be >= 2, got {t}")
    l0 = L - t
    if l0 < 1:
        raise ValueError(f"depth {t} leaves no tail at length {a.shape[-1]}")
    size = a.shape[-1]
    qvec = np.zeros(a.shape[:-1] + (1 << t,), dtype=np.uint8)
    for step in range(t):
        half = size >> (step + 1)
        v = a.reshape(a.shape[:-1] + (1 << step, 2 * half))
        c = f_llr(v[..., :half], v[..., half:], rule)
        c = c.reshape(a.shape[:-1] + (size // 2,))
        qvec[..., _chain_qvec_index(t, step)] = hard_decision(_halving_sum(c))
    avec = polar_transform(qvec)
    rows = a.reshape(a.shape[:-1] + (1 << t, 1 << l0))
    agg = ((1.0 - 2.0 * avec)[..., None] * rows).sum(axis=-2)
    beta = decode_spc(agg) if kind == REPTSPC else hard_decision(agg)
    out = avec[..., None] ^ beta[..., None, :]
    return out.reshape(a.shape[:-1] + (a.shape[-1],))


def _loo_boxplus(rows, rule):
    # leave-one-out combination along the row axis via prefix/suffix
    # folds; +inf is the neutral element
    k = rows.shape[-2]
    pref = np.empty_like(rows)
    suf = np.empty_like(rows)
    run = np.full(rows.shape[:-2] + rows.shape[-1:], np.inf)
    for i in range(k):
        pref[..., i, :] = run
        run = f_llr(run, rows[..., i, :], rule)
    run = np.full(rows.shape[:-2] + rows.shape[-1:], np.inf)
    for i in range(k - 1, -1, -1):
        suf[..., i, :] = run
        run = f_llr(run, rows[..., i, :], rule)
    return f_llr(pref, suf, rule)


def _repair_column_parity(bits, rel, q):
    """Flip the least reliable row in every column whose parity misses q.

    ``bits`` and ``rel`` (reliability, larger is firmer) have shape
    (..., rows, cols); ``q`` has the batch shape.  Returns a repaired
    copy; ties pick the lowest row.
    """
    k, m = bits.shape[-2:]
    out = bits.copy()
    bad = (np.bitwise_xor.reduce(bits, axis=-2) ^ q[..., None]).astype(bool)
    j = rel.argmin(axis=-2)
    flat = out.reshape(-1, k, m)
    rows, cols = np.nonzero(bad.reshape(-1, m))
    flat[rows, j.reshape(-1, m)[rows, cols], cols] ^= 1
    return flat.reshape(bits.shape)


def _local_info_pattern(kind, t, l0):
    # information-bit pattern of the subtree's local code
    rep = [0] * ((1 << l0) - 1) + [1]
    spc = [0] + [1] * ((1 << l0) - 1)
    blocks = [rep]
    if kind == REPR1T:
        blocks.append([1] * (1 << l0))
        blocks += [[1] * (1 << m) for m in range(l0 + 1, l0 + t)]
    else:
        blocks.append(spc)
        for m in range(l0 + 1, l0 + t):
            if kind == REPSPCT:
                blocks.append([0] + [1] * ((1 << m) - 1))
            else:
                blocks.append([1] * (1 << m))
    return np.array(sum(blocks, []), dtype=bool)


_SUBTREE_SC = {}


def _subtree_decoder(kind, t, l0, rule):
    key = (kind, t, l0, rule)
    dec = _SUBTREE_SC.get(key)
    if dec is None:
        pattern = _local_info_pattern(kind, t, l0)
        code = CodeSpec(pattern.size, int(pattern.sum()), ~pattern)
        dec = _SUBTREE_SC[key] = ScDecoder(code, f_method=rule)
    return dec


def decode_group_c(kind, alpha, t, rule="minsum"):
    """Bottom repetition block with parity or rate-one siblings.

    The parity variants estimate all partial sums in parallel from
    leave-one-out combinations and repair per-column parity against the
    repetition bit.  Columns are repaired independently, so a frame can
    still breach the constraints tying columns together; those frames
    redo the subtree's exact descent, which keeps every output a local
    codeword without the error-rate cost of zero-forcing message bits.
    The rate-one variant replays the subtree sequentially and is exact.
    """
    a = np.asarray(alpha, dtype=np.float64)
    L = _level_of(a.shape[-1])
    if kind not in (REPSPCT, REPSPCR1T1, REPR1T):
        raise ValueError(f"unknown kind {kind!r}")
    if t < 1:
        raise ValueError(f"depth must be >= 1, got {t}")
    l0 = L - t
    if l0 < 1:
        raise ValueError(f"depth {t} leaves no bottom block at length {a.shape[-1]}")
    m = 1 << l0
    rows = a.reshape(a.shape[:-1] + (1 << t, m))

    if kind == REPR1T:
        stack = [rows]
        cur = rows
        while cur.shape[-2] > 1:
            hk = cur.shape[-2] // 2
            cur = f_llr(cur[..., :hk, :], cur[..., hk:, :], rule)
            stack.append(cur)
        q = hard_decision(_halving_sum(cur[..., 0, :]))
        beta = np.broadcast_to(q[..., None, None], cur.shape).astype(np.uint8).copy()
        for j in range(t):
            par = stack[t - 1 - j]
            hk = par.shape[-2] // 2
            r = g_llr(par[..., :hk, :], par[..., hk:, :], beta)
            rho = hard_decision(r)
            beta = np.concatenate([beta ^ rho, rho], axis=-2)
        return beta.reshape(a.shape)

    cur = rows
    while cur.shape[-2] > 1:
        hk = cur.shape[-2] // 2
        cur = f_llr(cur[..., :hk, :], cur[..., hk:, :], rule)
    q = hard_decision(_halving_sum(cur[..., 0, :]))
    dec = rows + _loo_boxplus(rows, rule)
    # flip by input reliability; the dec magnitudes of the two least
    # reliable rows tie exactly under min-sum whenever q is 1
    bits = _repair_column_parity(hard_decision(dec), np.abs(rows), q)
    out = bits.reshape(a.shape)
    frames = out.reshape(-1, a.shape[-1])
    u = polar_transform(frames)
    bad = u[:, ~_local_info_pattern(kind, t, l0)].any(axis=-1)
    if bad.any():
        alphas = a.reshape(-1, a.shape[-1])
        frames[bad] = _subtree_decoder(kind, t, l0, rule).decode(alphas[bad])[1]
    return out


_GROUP_A = (R0TSPC, R0T1REPSPC)
_GROUP_B = (REPTSPC, REPTR1)
_GROUP_C = (REPSPCT, REPSPCR1T1, REPR1T)


class FastDecoder:
    """Schedule-driven decoder over pruned subtrees.

    Parameters
    ----------
    code : CodeSpec
    schedule : DecodeSchedule, optional
        Built for this code; defaults to the fast-ssc bundle.
    rule : str
        Check-node rule, "minsum" or "exact".
    """

    def __init__(self, code, schedule=None, rule="minsum"):
        if schedule is None:
            schedule = build_schedule(code, "fast-ssc")
        if schedule.code.N != code.N or not np.array_equal(
            schedule.code.frozen_mask, code.frozen_mask
        ):
            raise ValueError("schedule was built for a different code")
        self.code = code
        self.schedule = schedule
        self.rule = rule

    def _node_beta(self, step, alpha):
        kind = step.kind
        if kind == R0:
            return np.zeros(alpha.shape, dtype=np.uint8)
        if kind == R1:
            return decode_r1(alpha)
        if kind == REP:
            return decode_rep(alpha)
        if kind == SPC:
            return decode_spc(alpha)
        if kind == REP_SPC:
            return decode_rep_spc(alpha, self.rule)
        if kind in _GROUP_A:
            return decode_group_a(kind, alpha, step.t, self.rule)
        if kind in _GROUP_B:
            return decode_group_b(kind, alpha, step.t, self.rule)
        if kind in _GROUP_C:
            return decode_group_c(kind, alpha, step.t, self.rule)
        if kind == GENERIC:
            if step.level != 0:
                raise ValueError(f"generic node above leaf level at offset {step.offset}")
            if self.code.frozen_mask[step.offset]:
                return np.zeros(alpha.shape, dtype=np.uint8)
            return hard_decision(alpha)
        raise ValueError(f"unknown node kind {kind!r}")

    def decode(self, llrs):
        """Decode channel LLRs of shape (N,) or (B, N).

        Returns
        -------
        info : numpy.ndarray
            Decided information bits, shape (..., K).
        codeword : numpy.ndarray
            Root partial sums, shape (..., N).
        """
        llrs = np.asarray(llrs, dtype=np.float64)
        squeeze = llrs.ndim == 1
        llrs = np.atleast_2d(llrs)
        if llrs.shape[-1] != self.code.N:
            raise ValueError(f"LLR length {llrs.shape[-1]} does not match N={self.code.N}")
        n = self.code.n
        al = {n: llrs}
        bet = {}
        left = {}
        for step in self.schedule.steps:
            lvl = step.level
            if step.op == "F":
                a = al[lvl]
                h = 1 << (lvl - 1)
                al[lvl - 1] = f_llr(a[:, :h], a[:, h:], self.rule)
            elif step.op == "G":
                a = al[lvl]
                h = 1 << (lvl - 1)
                left[lvl] = bet[lvl - 1]
                al[lvl - 1] = g_llr(a[:, :h], a[:, h:], left[lvl])
            elif step.op == "COMBINE":
                bl, br = left.pop(lvl), bet[lvl - 1]
                bet[lvl] = np.concatenate([bl ^ br, br], axis=-1)
            else:
                bet[lvl] = self._node_beta(step, al[lvl])
        x_hat = bet[n]
        u_full = polar_transform(x_hat)
        info = u_full[:, self.code.info_positions]
        if squeeze:
            return info[0], x_hat[0]
        return info, x_hat


def decode_fast(code, alpha, sched=None, rule="minsum"):
    """One-shot pruned-tree decode; see ``FastDecoder.decode``."""
    return FastDecoder(code, sched, rule).decode(alpha)
