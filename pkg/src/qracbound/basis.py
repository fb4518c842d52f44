"""Generalized Gell-Mann generators and the density-matrix <-> Bloch-vector maps.

Canonical generator order for dimension N (fixed, since strategy files store
coordinates in this order):

1. symmetric ``E_jk + E_kj`` for j < k, lexicographic in (j, k);
2. antisymmetric ``-i (E_jk - E_kj)`` in the same order;
3. diagonal ``sqrt(2 / (l (l + 1))) (sum_{j<=l} E_jj - l E_{l+1,l+1})``, l = 1..N-1.

For N = 2 this is (X, Y, Z). All generators are traceless with
``Tr[s_i s_j] = 2 delta_ij``, and a state is written

    rho(beta) = I / N + 1/2 * sum_i beta_i s_i .
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .linalg import as_hermitian

MIN_DIM = 2
MAX_DIM = 16


def _check_dim(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or not MIN_DIM <= n <= MAX_DIM:
        raise ValidationError(f"dimension N must be an integer in [{MIN_DIM}, {MAX_DIM}], got {n!r}")
    return int(n)


@lru_cache(maxsize=None)
def _generators(n: int) -> np.ndarray:
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    gens = []
    for j, k in pairs:
        g = np.zeros((n, n), dtype=complex)
        g[j, k] = g[k, j] = 1.0
        gens.append(g)
    for j, k in pairs:
        g = np.zeros((n, n), dtype=complex)
        g[j, k] = -1j
        g[k, j] = 1j
        gens.append(g)
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1.0
        d[l] = -float(l)
        gens.append(np.diag(np.sqrt(2.0 / (l * (l + 1))) * d).astype(complex))
    out = np.array(gens)
    out.setflags(write=False)
    return out


def gellmann_generators(n: int) -> np.ndarray:
    """Return the ``(N**2 - 1, N, N)`` read-only stack of generators for dimension N."""
    return _generators(_check_dim(n))


def bloch_length(n: int) -> int:
    return n * n - 1


def dim_from_length(length: int) -> int:
    """Infer N from a Bloch vector length N**2 - 1."""
    n = int(round(np.sqrt(length + 1)))
    if n * n - 1 != length:
        raise ValidationError(f"length {length} is not N**2 - 1 for any integer N")
    return _check_dim(n)


def as_bloch(beta, n: int | None = None) -> np.ndarray:
    """Validate a Bloch vector (or stack of them) and return it as a float array."""
    b = np.array(beta, dtype=float)
    if b.ndim == 0:
        raise ValidationError("Bloch vector must be a sequence of coordinates")
    if not np.all(np.isfinite(b)):
        raise ValidationError("Bloch vector has non-finite coordinates")
    if n is None:
        dim_from_length(b.shape[-1])
    elif b.shape[-1] != bloch_length(_check_dim(n)):
        raise ValidationError(
            f"Bloch vector for N={n} needs {bloch_length(n)} coordinates, got {b.shape[-1]}"
        )
    return b


def bloch_to_density(beta, n: int | None = None) -> np.ndarray:
    """``rho(beta) = I/N + 1/2 sum_i beta_i s_i``; positivity is not required.

    Works on stacks: an input of shape ``(..., N**2 - 1)`` gives ``(..., N, N)``.
    """
    b = as_bloch(beta, n)
    n = dim_from_length(b.shape[-1])
    rho = 0.5 * np.tensordot(b, _generators(n), axes=([-1], [0]))
    rho += np.eye(n) / n
    return rho


def operator_coords(op) -> np.ndarray:
    """Coordinates ``Tr[op s_i]`` of a Hermitian operator (no trace condition)."""
    a = as_hermitian(op, "operator")
    gens = gellmann_generators(a.shape[-1])
    # Tr[A s_i] = sum_jk A_jk (s_i)_kj
    return np.einsum("...jk,ikj->...i", a, gens).real


def density_to_bloch(rho) -> np.ndarray:
    """Inverse of :func:`bloch_to_density`: ``beta_i = Tr[rho s_i]``."""
    a = as_hermitian(rho, "density matrix")
    tr = np.trace(a, axis1=-2, axis2=-1).real
    if np.any(np.abs(tr - 1.0) > 1e-9):
        raise ValidationError(f"density matrix must have unit trace, got {np.ravel(tr)[0]:.12g}")
    return operator_coords(a)


def overlap(beta1, beta2) -> float:
    """``Tr[rho(beta1) rho(beta2)] = 1/N + <beta1, beta2> / 2``."""
    b1, b2 = as_bloch(beta1), as_bloch(beta2)
    if b1.shape[-1] != b2.shape[-1]:
        raise ValidationError(
            f"Bloch vectors have different dimensions ({b1.shape[-1]} vs {b2.shape[-1]})"
        )
    n = dim_from_length(b1.shape[-1])
    val = 1.0 / n + 0.5 * np.sum(b1 * b2, axis=-1)
    return float(val) if np.ndim(val) == 0 else val


def pure_state_bloch(psi) -> np.ndarray:
    """Bloch vector of the normalized state vector ``psi``."""
    v = np.asarray(psi, dtype=complex)
    v = v / np.linalg.norm(v, axis=-1, keepdims=True)
    return density_to_bloch(v[..., :, None] * np.conj(v[..., None, :]))
