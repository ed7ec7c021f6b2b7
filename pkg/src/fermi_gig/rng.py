"""Portable seeded random streams and random test-object generators.

The underlying generator is SplitMix64:

    state <- state + 0x9E3779B97F4A7C15 (mod 2^64)
    z <- state
    z <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z <- (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

Uniform doubles use the top 53 bits, ``(u >> 11) * 2**-53``, and normals use
Box-Muller on two consecutive uniforms (the cosine branch only).  Any
implementation following these three rules reproduces every derived example.
"""
from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, size=None):
        if size is None:
            return (self.next_u64() >> 11) * (1.0 / (1 << 53))
        n = int(np.prod(size))
        out = np.array([(self.next_u64() >> 11) for _ in range(n)], dtype=np.float64)
        return (out * (1.0 / (1 << 53))).reshape(size)

    def normal(self, size=None):
        if size is None:
            u1 = self.uniform()
            u2 = self.uniform()
            return math.sqrt(-2.0 * math.log1p(-u1)) * math.cos(2.0 * math.pi * u2)
        n = int(np.prod(size))
        u = self.uniform((n, 2))
        return (np.sqrt(-2.0 * np.log1p(-u[:, 0])) * np.cos(2.0 * np.pi * u[:, 1])).reshape(size)

    def complex_normal(self, size):
        return (self.normal(size) + 1j * self.normal(size)) / math.sqrt(2.0)

    def integers(self, low: int, high: int) -> int:
        """Integer in ``[low, high)``."""
        return low + int(self.uniform() * (high - low))

    def spawn(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())


def as_rng(rng) -> SplitMix64:
    if isinstance(rng, SplitMix64):
        return rng
    return SplitMix64(0 if rng is None else int(rng))


def random_unitary(n: int, rng) -> np.ndarray:
    rng = as_rng(rng)
    q, r = np.linalg.qr(rng.complex_normal((n, n)))
    d = np.diag(r)
    return q * (d / np.abs(d))[None, :]


def random_hermitian(n: int, rng, scale: float = 1.0) -> np.ndarray:
    rng = as_rng(rng)
    m = rng.complex_normal((n, n))
    return scale * 0.5 * (m + m.conj().T)


def random_symbol(n: int, rng, low: float = 0.0, high: float = 1.0) -> np.ndarray:
    """Random ``Q`` with spectrum uniform in ``[low, high]``."""
    rng = as_rng(rng)
    v = random_unitary(n, rng)
    mu = low + (high - low) * rng.uniform(n)
    return (v * mu[None, :]) @ v.conj().T


def random_contraction(n: int, rng, max_norm: float = 1.0) -> np.ndarray:
    rng = as_rng(rng)
    m = rng.complex_normal((n, n))
    s = np.linalg.norm(m, 2)
    return m * (max_norm * rng.uniform() ** 0.25 / s)


def random_pair(n: int, rng, max_norm: float = 0.95):
    """Random compatible pair ``(S, R)`` with ``0 <= R <= I - SS*``."""
    rng = as_rng(rng)
    s = random_contraction(n, rng, max_norm)
    d = np.eye(n) - s @ s.conj().T
    w, v = np.linalg.eigh(d)
    root = (v * np.sqrt(np.clip(w, 0, None))[None, :]) @ v.conj().T
    t = random_symbol(n, rng)
    r = root @ t @ root
    return s, 0.5 * (r + r.conj().T)


def random_params(n: int, rng, normal: bool = False):
    """Random semigroup parameters ``(G, A)`` with ``0 <= A <= -(G + G*)``."""
    rng = as_rng(rng)
    h = random_hermitian(n, rng)
    w, v = np.linalg.eigh(h)
    w = 0.2 + np.abs(w)
    hpos = (v * w[None, :]) @ v.conj().T
    k = np.zeros((n, n)) if normal else random_hermitian(n, rng)
    g = -hpos - 1j * k
    if not normal:
        g = g + 0.5 * (lambda m: m - m.conj().T)(rng.complex_normal((n, n)))
    twoh = -(g + g.conj().T)
    w, v = np.linalg.eigh(twoh)
    root = (v * np.sqrt(np.clip(w, 0, None))[None, :]) @ v.conj().T
    t = random_symbol(n, rng)
    a = root @ t @ root
    return g, 0.5 * (a + a.conj().T)


def random_density(dim: int, rng, rank: int | None = None) -> np.ndarray:
    """Random density with ``Tr(rho) = dim`` (so that the normalized trace is 1)."""
    rng = as_rng(rng)
    rank = dim if rank is None else rank
    m = rng.complex_normal((dim, rank))
    rho = m @ m.conj().T
    return rho * (dim / np.trace(rho).real)
