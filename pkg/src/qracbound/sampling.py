"""Seeded random sampling of states, unitaries and POVMs.

All randomness goes through :func:`make_rng`, a NumPy ``Generator`` on the
Philox-4x64 counter-based bit generator, so a seed fully determines every
simulation, campaign and optimizer run.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator keyed by ``seed XOR stream`` (``stream`` is e.g. a restart index)."""
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise ValidationError(f"seed must be a non-negative integer, got {seed!r}")
    return np.random.Generator(np.random.Philox(int(seed) ^ int(stream)))


def ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    shape = tuple(np.atleast_1d(shape))
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_density(rng: np.random.Generator, n: int, size: int | None = None) -> np.ndarray:
    """Full-rank random state ``G G^dagger / Tr[G G^dagger]`` with complex Gaussian G."""
    lead = () if size is None else (size,)
    g = ginibre(rng, lead + (n, n))
    rho = g @ np.conj(np.swapaxes(g, -1, -2))
    rho /= np.trace(rho, axis1=-2, axis2=-1).real[..., None, None]
    return 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))


def random_pure_vector(rng: np.random.Generator, n: int, size: int | None = None) -> np.ndarray:
    lead = () if size is None else (size,)
    v = ginibre(rng, lead + (n,))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def random_unitary(rng: np.random.Generator, n: int, size: int | None = None) -> np.ndarray:
    """Haar unitary via QR of a Ginibre matrix with the phase fix on R's diagonal."""
    lead = () if size is None else (size,)
    q, r = np.linalg.qr(ginibre(rng, lead + (n, n)))
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[..., None, :]


def random_povm_element(rng: np.random.Generator, n: int, size: int | None = None) -> np.ndarray:
    """Random effect ``0 <= D <= I``: Haar eigenbasis, eigenvalues uniform on [0, 1]."""
    lead = () if size is None else (size,)
    u = random_unitary(rng, n, size)
    lam = rng.uniform(0.0, 1.0, lead + (n,))
    d = (u * lam[..., None, :]) @ np.conj(np.swapaxes(u, -1, -2))
    return 0.5 * (d + np.conj(np.swapaxes(d, -1, -2)))


def random_projector(rng: np.random.Generator, n: int, rank: int, size: int | None = None) -> np.ndarray:
    """Haar-random rank-``rank`` orthogonal projector."""
    u = random_unitary(rng, n, size)[..., :, :rank]
    p = u @ np.conj(np.swapaxes(u, -1, -2))
    return 0.5 * (p + np.conj(np.swapaxes(p, -1, -2)))
