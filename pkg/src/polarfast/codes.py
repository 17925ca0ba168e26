"""Polar code construction, encoding, and message placement.

A code of length N = 2**n is described by a frozen mask over the input
vector u.  Encoding multiplies u by the n-fold Kronecker power of the
2x2 kernel [[1, 0], [1, 1]] over GF(2), computed in place as a butterfly.
The transform is an involution, so it is also used to recover u from a
codeword.
"""

import json
import math

import numpy as np

CONSTRUCTIONS = ("bhattacharyya", "gaussian")

# Chung-style curve fit for the mean-LLR evolution function and its tail.
_PHI_A = -0.4527
_PHI_B = 0.859
_PHI_C = 0.0218


def _check_block_length(N):
    if N < 2 or (N & (N - 1)) != 0:
        raise ValueError(f"block length must be a power of two >= 2, got {N}")


def bhattacharyya_parameters(N, erasure_prob=0.5):
    """Bhattacharyya parameters of the N synthetic channels.

    The recursion starts from a single erasure-style parameter and splits
    each channel into a degraded copy (2z - z^2) and an upgraded copy
    (z^2).  Smaller values mean more reliable channels.

    Parameters
    ----------
    N : int
        Code length, a power of two.
    erasure_prob : float
        Initial channel parameter in (0, 1).

    Returns
    -------
    numpy.ndarray
        Length-N vector of channel parameters, indexed by input position.
    """
    _check_block_length(N)
    if not 0.0 < erasure_prob < 1.0:
        raise ValueError(f"erasure_prob must be in (0, 1), got {erasure_prob}")
    z = np.array([erasure_prob], dtype=np.float64)
    while z.size < N:
        nxt = np.empty(2 * z.size, dtype=np.float64)
        nxt[0::2] = 2.0 * z - z * z
        nxt[1::2] = z * z
        z = nxt
    return z


def _log_phi(x):
    # log of the mean-LLR evolution function; tail branch kept in the log
    # domain so large means do not underflow.
    if x < 10.0:
        return _PHI_A * x**_PHI_B + _PHI_C
    return 0.5 * (math.log(math.pi) - math.log(x)) - x / 4.0 + math.log1p(-10.0 / (7.0 * x))


def _phi_inv_log(ly):
    if ly >= _log_phi(10.0):
        return ((ly - _PHI_C) / _PHI_A) ** (1.0 / _PHI_B)
    lo, hi = 10.0, 20.0
    while _log_phi(hi) > ly:
        lo, hi = hi, hi * 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if _log_phi(mid) > ly:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def gaussian_approx_means(N, design_snr_db):
    """Mean channel LLRs of the N synthetic channels under a Gaussian model.

    ``design_snr_db`` is the design symbol SNR (Es/N0) in dB; it is kept
    rate-independent so the reliability ranking of the positions depends
    only on (N, design_snr_db).  For a target information rate R the
    equivalent per-bit figure is Eb/N0 = Es/N0 - 10*log10(R).

    Returns
    -------
    numpy.ndarray
        Length-N vector of LLR means; larger means more reliable.
    """
    _check_block_length(N)
    m = np.array([4.0 * 10.0 ** (design_snr_db / 10.0)], dtype=np.float64)
    while m.size < N:
        nxt = np.empty(2 * m.size, dtype=np.float64)
        for i, mi in enumerate(m):
            if mi <= 0.0:
                nxt[2 * i] = 0.0
            else:
                lp = _log_phi(mi)
                p = math.exp(lp)
                # phi of the degraded channel: 1 - (1 - p)^2 = p * (2 - p)
                nxt[2 * i] = _phi_inv_log(lp + math.log(2.0 - min(p, 1.0)))
            nxt[2 * i + 1] = 2.0 * mi
        m = nxt
    return m


class CodeSpec:
    """Frozen description of one polar code.

    Attributes
    ----------
    N : int
        Block length, a power of two.
    K : int
        Number of information positions.
    frozen_mask : numpy.ndarray
        Boolean vector of length N, True where the input is frozen to zero.
    construction : str
        Name of the construction that produced the mask.
    design_param : float
        Construction parameter (erasure probability or design SNR in dB).
    """

    def __init__(self, N, K, frozen_mask, construction="custom", design_param=0.0):
        _check_block_length(N)
        frozen_mask = np.asarray(frozen_mask, dtype=bool).copy()
        if frozen_mask.shape != (N,):
            raise ValueError(f"frozen mask length {frozen_mask.shape} does not match N={N}")
        if not 0 <= K <= N:
            raise ValueError(f"K must be in [0, {N}], got {K}")
        if int((~frozen_mask).sum()) != K:
            raise ValueError(f"frozen mask has {int((~frozen_mask).sum())} information positions, expected {K}")
        frozen_mask.setflags(write=False)
        self.N = N
        self.K = K
        self.frozen_mask = frozen_mask
        self.construction = construction
        self.design_param = float(design_param)
        self.info_positions = np.flatnonzero(~frozen_mask)
        self.info_positions.setflags(write=False)

    @property
    def n(self):
        return self.N.bit_length() - 1

    @property
    def rate(self):
        return self.K / self.N

    @property
    def pattern(self):
        """Construction pattern as a string, '0' frozen and '1' information."""
        return "".join("0" if f else "1" for f in self.frozen_mask)

    @classmethod
    def from_pattern(cls, pattern, construction="custom", design_param=0.0):
        """Build a CodeSpec from a 0/1 pattern string or bit sequence."""
        bits = np.array([int(c) for c in pattern], dtype=np.uint8)
        if not np.isin(bits, (0, 1)).all():
            raise ValueError("pattern must contain only 0s and 1s")
        return cls(bits.size, int(bits.sum()), bits == 0, construction, design_param)

    def __repr__(self):
        return f"CodeSpec(N={self.N}, K={self.K}, construction={self.construction!r})"

    def __eq__(self, other):
        if not isinstance(other, CodeSpec):
            return NotImplemented
        return (
            self.N == other.N
            and self.K == other.K
            and np.array_equal(self.frozen_mask, other.frozen_mask)
            and self.construction == other.construction
            and self.design_param == other.design_param
        )

    def __hash__(self):
        return hash((self.N, self.K, self.frozen_mask.tobytes()))

    def to_json_dict(self):
        mask_bits = "".join("1" if f else "0" for f in self.frozen_mask)
        width = (self.N + 3) // 4
        return {
            "n": self.n,
            "N": self.N,
            "K": self.K,
            "construction": self.construction,
            "design_param": self.design_param,
            "frozen_mask": format(int(mask_bits, 2), f"0{width}x"),
            "pattern": self.pattern,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_json_dict(), indent=indent)

    @classmethod
    def from_json(cls, payload):
        data = json.loads(payload) if isinstance(payload, str) else payload
        N = int(data["N"])
        mask_bits = format(int(data["frozen_mask"], 16), f"0{N}b")[-N:]
        mask = np.array([c == "1" for c in mask_bits], dtype=bool)
        return cls(N, int(data["K"]), mask, data.get("construction", "custom"),
                   float(data.get("design_param", 0.0)))


def build_code(N, K, method="bhattacharyya", design_param=None):
    """Construct a polar code by freezing the least reliable positions.

    Parameters
    ----------
    N : int
        Block length, a power of two >= 2.
    K : int
        Number of information positions, 1 <= K <= N.
    method : str
        "bhattacharyya" (default) ranks channels by the erasure-proxy
        recursion; "gaussian" ranks by Gaussian-approximated mean LLRs.
    design_param : float, optional
        Erasure probability for "bhattacharyya" (default 0.5) or design
        Es/N0 in dB for "gaussian" (default 2.0).

    Returns
    -------
    CodeSpec
    """
    _check_block_length(N)
    if not 1 <= K <= N:
        raise ValueError(f"K must be in [1, {N}], got {K}")
    if method == "bhattacharyya":
        if design_param is None:
            design_param = 0.5
        z = bhattacharyya_parameters(N, design_param)
        # ascending reliability score; ties freeze the lower index
        order = np.lexsort((-np.arange(N), z))
    elif method == "gaussian":
        if design_param is None:
            design_param = 2.0
        m = gaussian_approx_means(N, design_param)
        order = np.lexsort((-np.arange(N), -m))
    else:
        raise ValueError(f"unknown construction {method!r}")
    frozen = np.ones(N, dtype=bool)
    frozen[order[:K]] = False
    return CodeSpec(N, K, frozen, method, design_param)


def polar_transform(bits):
    """Apply the GF(2) butterfly transform along the last axis.

    Accepts a single vector or a batch of row vectors.  The transform is
    its own inverse.
    """
    x = np.array(bits, dtype=np.uint8, copy=True)
    N = x.shape[-1]
    _check_block_length(N)
    flat = x.reshape(-1, N)
    h = 1
    while h < N:
        v = flat.reshape(-1, N // (2 * h), 2, h)
        v[:, :, 0, :] ^= v[:, :, 1, :]
        h *= 2
    return x


def encode(code, u):
    """Encode input vectors that carry zeros at the frozen positions.

    Parameters
    ----------
    code : CodeSpec
    u : array_like
        Shape (..., N) bit array with u[..., i] = 0 wherever i is frozen.

    Returns
    -------
    numpy.ndarray
        Codeword array of the same shape.
    """
    u = np.asarray(u, dtype=np.uint8)
    if u.shape[-1] != code.N:
        raise ValueError(f"input length {u.shape[-1]} does not match N={code.N}")
    if u[..., code.frozen_mask].any():
        raise ValueError("nonzero value at a frozen position")
    return polar_transform(u)


def insert_info_bits(code, info):
    """Scatter K information bits into a length-N input vector."""
    info = np.asarray(info, dtype=np.uint8)
    if info.shape[-1] != code.K:
        raise ValueError(f"info length {info.shape[-1]} does not match K={code.K}")
    u = np.zeros(info.shape[:-1] + (code.N,), dtype=np.uint8)
    u[..., code.info_positions] = info
    return u


def extract_info_bits(code, u):
    """Gather the K information bits from a length-N input vector."""
    u = np.asarray(u, dtype=np.uint8)
    if u.shape[-1] != code.N:
        raise ValueError(f"input length {u.shape[-1]} does not match N={code.N}")
    return u[..., code.info_positions]
