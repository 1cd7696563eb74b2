"""Bit-level statevector kernels shared by the chain and propagator modules.

Basis convention: the computational basis is the sigma^z product basis,
indexed by bitstrings b = 0 .. 2^N - 1 with site i stored at bit i (site 0
is the least significant bit).  Bit value 0 means sigma^z = +1 (spin up),
bit value 1 means sigma^z = -1.

The sigma^x product basis uses the same bit layout with bit 0 = |right>
(sigma^x = +1) and bit 1 = |left>.  The two bases are related by the
orthonormal Walsh-Hadamard transform implemented here.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def popcount_table(n_sites: int) -> np.ndarray:
    """popcount(b) for every basis index b of an n_sites chain."""
    counts = np.zeros(1, dtype=np.int64)
    for _ in range(n_sites):
        counts = np.concatenate([counts, counts + 1])
    counts.setflags(write=False)
    return counts


@lru_cache(maxsize=32)
def z_sign_total(n_sites: int) -> np.ndarray:
    """sum_i s_i(b) where s_i = +1 / -1 for bit i clear / set."""
    signs = (n_sites - 2 * popcount_table(n_sites)).astype(np.float64)
    signs.setflags(write=False)
    return signs


@lru_cache(maxsize=32)
def site_sign_table(n_sites: int) -> np.ndarray:
    """Per-site sign table of shape (n_sites, 2^n_sites): s_i(b) = +/-1."""
    b = np.arange(1 << n_sites, dtype=np.int64)
    bits = (b[None, :] >> np.arange(n_sites)[:, None]) & 1
    signs = 1.0 - 2.0 * bits
    signs.setflags(write=False)
    return signs


def bit_flip_view(arr: np.ndarray, site: int) -> np.ndarray:
    """View of arr (last axis = 2^N) with bit `site` of the index flipped."""
    dim = arr.shape[-1]
    lead = arr.shape[:-1]
    v = arr.reshape(lead + (dim >> (site + 1), 2, 1 << site))
    return v[..., ::-1, :].reshape(lead + (dim,))


def pair_flip_view(arr: np.ndarray, site_i: int, site_j: int) -> np.ndarray:
    """View of arr with bits site_i < site_j of the index both flipped."""
    if site_i > site_j:
        site_i, site_j = site_j, site_i
    dim = arr.shape[-1]
    lead = arr.shape[:-1]
    shape = lead + (
        dim >> (site_j + 1),
        2,
        1 << (site_j - site_i - 1),
        2,
        1 << site_i,
    )
    v = arr.reshape(shape)
    return v[..., ::-1, :, ::-1, :].reshape(lead + (dim,))


def fwht_norm(vec: np.ndarray) -> np.ndarray:
    """Orthonormal Walsh-Hadamard transform along the last axis.

    Self-inverse; maps between the z and x product bases.  Allocates the
    result; use `fwht_unnorm` with caller-owned buffers in hot loops.
    """
    out = np.array(vec, dtype=np.complex128, copy=True)
    work = np.empty_like(out)
    res = fwht_unnorm(out, work)
    res *= 1.0 / np.sqrt(vec.shape[-1])
    return res

def fwht_unnorm(src: np.ndarray, work: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard butterfly over the last axis (length 2^n).

    Ping-pongs between `src` and `work`; returns whichever buffer holds the
    result (the other one is scratch afterwards).  Both buffers are clobbered.
    """
    dim = src.shape[-1]
    lead = src.shape[:-1]
    a, b = src, work
    h = 1
    while h < dim:
        s = a.reshape(lead + (dim // (2 * h), 2, h))
        d = b.reshape(lead + (dim // (2 * h), 2, h))
        np.add(s[..., 0, :], s[..., 1, :], out=d[..., 0, :])
        np.subtract(s[..., 0, :], s[..., 1, :], out=d[..., 1, :])
        a, b = b, a
        h *= 2
    return a
