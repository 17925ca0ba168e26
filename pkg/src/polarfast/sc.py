"""Successive-cancellation decoding over a binary-tree message schedule.

LLR convention: positive favours bit 0.  The decoder works on the
natural-order tree, splitting each length-2h vector into first and
second halves.  The left child message is the check combination of the
halves, the right child message folds in the left decision, and the
parent decision vector is [beta_left ^ beta_right, beta_right].

All kernels broadcast over leading axes so a batch of frames decodes in
one pass.
"""

import numpy as np

_ATANH_EPS = 1e-12


def f_llr(a, b, method="minsum"):
    """Check-node LLR combination.

    Parameters
    ----------
    a, b : array_like
        LLR arrays of equal shape.
    method : str
        "minsum" (default) uses the sign-magnitude approximation,
        "exact" evaluates 2 atanh(tanh(a/2) tanh(b/2)).

    Returns
    -------
    numpy.ndarray
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if method == "minsum":
        return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    if method == "exact":
        t = np.tanh(a / 2.0) * np.tanh(b / 2.0)
        return 2.0 * np.arctanh(np.clip(t, -1.0 + _ATANH_EPS, 1.0 - _ATANH_EPS))
    raise ValueError(f"unknown f method {method!r}")


def g_llr(a, b, bit):
    """Variable-node LLR combination given the left-side decision."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    bit = np.asarray(bit)
    return a * (1.0 - 2.0 * bit) + b


def combine(beta_left, beta_right):
    """Interleave two decision vectors into the parent decision.

    Pairs (beta_left[i] ^ beta_right[i], beta_right[i]) are laid out
    adjacently, matching the generator recursion on pair-interleaved
    indexing.
    """
    bl = np.asarray(beta_left, dtype=np.uint8)
    br = np.asarray(beta_right, dtype=np.uint8)
    if bl.shape != br.shape:
        raise ValueError(f"shape mismatch {bl.shape} vs {br.shape}")
    out = np.empty(bl.shape[:-1] + (2 * bl.shape[-1],), dtype=np.uint8)
    out[..., 0::2] = bl ^ br
    out[..., 1::2] = br
    return out


def hard_decision(llr):
    """Map LLRs to bits: 0 when the LLR is >= 0, else 1."""
    return (np.asarray(llr) < 0).astype(np.uint8)


class ScDecoder:
    """Plain successive-cancellation decoder for one code.

    The depth-first message schedule is flattened once at construction;
    decoding is a loop over (op, level/offset) steps with per-level
    LLR and decision buffers, broadcasting over a leading frame axis.

    Parameters
    ----------
    code : CodeSpec
    f_method : str
        Check-node rule, "minsum" or "exact".
    """

    def __init__(self, code, f_method="minsum"):
        self.code = code
        self.f_method = f_method
        self.plan = self._build_plan(code.n)

    @staticmethod
    def _build_plan(n):
        plan = []

        def walk(level, offset):
            if level == 1:
                plan.append(("L", offset))
                return
            plan.append(("F", level))
            walk(level - 1, offset)
            plan.append(("G", level))
            walk(level - 1, offset + (1 << (level - 1)))
            plan.append(("C", level))

        walk(n, 0)
        return plan

    def decode(self, llrs):
        """Decode channel LLRs.

        Parameters
        ----------
        llrs : array_like
            Shape (N,) or (B, N) channel LLRs.

        Returns
        -------
        info : numpy.ndarray
            Decided information bits, shape (..., K).
        codeword : numpy.ndarray
            Re-encoded hard decisions, shape (..., N).
        """
        llrs = np.asarray(llrs, dtype=np.float64)
        squeeze = llrs.ndim == 1
        llrs = np.atleast_2d(llrs)
        n = self.code.n
        if llrs.shape[-1] != self.code.N:
            raise ValueError(f"LLR length {llrs.shape[-1]} does not match N={self.code.N}")
        B = llrs.shape[0]
        frozen = self.code.frozen_mask
        # every step assigns a fresh array, so plain dicts serve as buffers
        al = {n: llrs}
        bet = {}
        left = {}
        u_hat = np.empty((B, self.code.N), dtype=np.uint8)

        for op, arg in self.plan:
            if op == "F":
                a = al[arg]
                h = 1 << (arg - 1)
                al[arg - 1] = f_llr(a[:, :h], a[:, h:], self.f_method)
            elif op == "G":
                a = al[arg]
                h = 1 << (arg - 1)
                left[arg] = bet[arg - 1]
                al[arg - 1] = g_llr(a[:, :h], a[:, h:], left[arg])
            elif op == "C":
                bl, br = left.pop(arg), bet[arg - 1]
                bet[arg] = np.concatenate([bl ^ br, br], axis=-1)
            else:
                a = al[1]
                if frozen[arg]:
                    b0 = np.zeros(B, dtype=np.uint8)
                else:
                    b0 = hard_decision(f_llr(a[:, 0], a[:, 1], self.f_method))
                r = g_llr(a[:, 0], a[:, 1], b0)
                b1 = np.zeros(B, dtype=np.uint8) if frozen[arg + 1] else hard_decision(r)
                u_hat[:, arg] = b0
                u_hat[:, arg + 1] = b1
                bet[1] = np.stack([b0 ^ b1, b1], axis=-1)

        info = u_hat[:, self.code.info_positions]
        x_hat = bet[n]
        if squeeze:
            return info[0], x_hat[0]
        return info, x_hat


def decode_sc(code, llrs, f_method="minsum"):
    """One-shot successive-cancellation decode.

    See ``ScDecoder.decode``; builds the decoder schedule each call, so
    prefer the class when decoding many batches of the same code.
    """
    return ScDecoder(code, f_method).decode(llrs)
