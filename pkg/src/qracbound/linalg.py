"""Dense Hermitian eigensolver (cyclic complex Jacobi) and spectral helpers.

Every routine accepts either a single ``(N, N)`` matrix or a stack
``(..., N, N)`` and processes the whole stack at once; the see-saw optimizer
relies on that to diagonalize hundreds of small matrices per step.

The rotation sequence depends only on the matrix itself (converged matrices
in a stack receive exact identity rotations), so the result for a given
matrix is bit-identical whether it is diagonalized alone or in a batch.
"""

from __future__ import annotations

from typing import Literal, NamedTuple

import numpy as np

from .errors import NumericError, ValidationError
from .tolerances import (
    HERM_TOL,
    JACOBI_MAX_SWEEPS,
    JACOBI_TOL,
    TOP_DEGEN_TOL,
    ZERO_EIG_TOL,
)

MAX_DIM = 64


class EigenDecomposition(NamedTuple):
    """Spectrum sorted descending; ``eigenvectors[..., :, k]`` pairs with ``eigenvalues[..., k]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_hermitian(h, name: str = "matrix") -> np.ndarray:
    """Validate ``h`` as a (stack of) Hermitian matrices and return a complex copy.

    Raises ValidationError if the matrix is not square, larger than 64, or if
    any entry differs from the conjugate of its transpose by more than
    ``HERM_TOL``. The returned array is exactly Hermitian.
    """
    a = np.array(h, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2] or a.shape[-1] == 0:
        raise ValidationError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if a.shape[-1] > MAX_DIM:
        raise ValidationError(f"{name} dimension {a.shape[-1]} exceeds {MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries")
    dev = np.abs(a - np.conj(np.swapaxes(a, -1, -2)))
    if dev.size and dev.max() > HERM_TOL:
        raise ValidationError(f"{name} is not Hermitian (max asymmetry {dev.max():.3e})")
    return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))


def _jacobi(a: np.ndarray, want_vectors: bool):
    """Cyclic-by-row Jacobi on a stack ``(B, N, N)``; ``a`` is overwritten."""
    nb, n, _ = a.shape
    v = np.broadcast_to(np.eye(n, dtype=complex), (nb, n, n)).copy() if want_vectors else None
    scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2))))
    offmask = ~np.eye(n, dtype=bool)

    for sweep in range(JACOBI_MAX_SWEEPS + 1):
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=1))
        active = off >= JACOBI_TOL * scale
        if not active.any():
            break
        if sweep == JACOBI_MAX_SWEEPS:
            raise NumericError(
                f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps "
                f"(off-diagonal residual {off.max():.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                g = np.abs(apq)
                rot = active & (g > 0.0)
                if not rot.any():
                    continue
                gs = np.where(rot, g, 1.0)
                phase = np.where(rot, apq / gs, 1.0)  # e^{i phi}
                tau = (a[:, q, q].real - a[:, p, p].real) / (2.0 * gs)
                t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
                t = np.where(rot, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # U = diag(1, e^{-i phi}) . [[c, s], [-s, c]] on the (p, q) plane
                u_qp = -s * np.conj(phase)
                u_qq = c * np.conj(phase)

                cp_, cq_ = a[:, :, p].copy(), a[:, :, q]
                a[:, :, p] = c[:, None] * cp_ + u_qp[:, None] * cq_
                a[:, :, q] = s[:, None] * cp_ + u_qq[:, None] * cq_
                rp, rq = a[:, p, :].copy(), a[:, q, :]
                a[:, p, :] = c[:, None] * rp + np.conj(u_qp)[:, None] * rq
                a[:, q, :] = s[:, None] * rp + np.conj(u_qq)[:, None] * rq
                a[:, p, q] = np.where(rot, 0.0, a[:, p, q])
                a[:, q, p] = np.where(rot, 0.0, a[:, q, p])
                a[:, p, p] = a[:, p, p].real
                a[:, q, q] = a[:, q, q].real

                if want_vectors:
                    vp, vq = v[:, :, p].copy(), v[:, :, q]
                    v[:, :, p] = c[:, None] * vp + u_qp[:, None] * vq
                    v[:, :, q] = s[:, None] * vp + u_qq[:, None] * vq

    w = np.diagonal(a, axis1=1, axis2=2).real.copy()
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    if want_vectors:
        v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w, v


def _run(h, want_vectors: bool):
    a = as_hermitian(h)
    batch_shape, n = a.shape[:-2], a.shape[-1]
    w, v = _jacobi(a.reshape(-1, n, n), want_vectors)
    w = w.reshape(batch_shape + (n,))
    if want_vectors:
        v = v.reshape(batch_shape + (n, n))
    return w, v


def eigh(h) -> EigenDecomposition:
    """Eigen-decomposition of a Hermitian matrix (or stack), eigenvalues descending."""
    w, v = _run(h, want_vectors=True)
    return EigenDecomposition(w, v)


def eigvalsh(h) -> np.ndarray:
    """Descending eigenvalues only."""
    return _run(h, want_vectors=False)[0]


def min_eigenvalue(h):
    """Smallest eigenvalue; a float for one matrix, an array for a stack."""
    w = eigvalsh(h)[..., -1]
    return float(w) if w.ndim == 0 else w


def _canonical_top_vector(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Deterministic unit vector in the top eigenspace of each matrix in the stack.

    Picks the first standard basis vector e_j with a non-negligible projection
    onto the top eigenspace and returns that projection, normalized. This is the
    vector of the eigenspace with the largest |j-th coordinate|, and its j-th
    coordinate comes out real and positive.
    """
    top = w[..., :1]
    in_top = w >= top - TOP_DEGEN_TOL * np.maximum(1.0, np.abs(top))
    vt = v * in_top[..., None, :]
    proj = vt @ np.conj(np.swapaxes(vt, -1, -2))
    diag = np.diagonal(proj, axis1=-2, axis2=-1).real
    j = np.argmax(diag > 1e-10, axis=-1)
    col = np.take_along_axis(proj, j[..., None, None], axis=-1)[..., 0]
    norm = np.sqrt(np.take_along_axis(diag, j[..., None], axis=-1))
    return col / norm


def top_eigenvector(h) -> np.ndarray:
    """Deterministic representative of the top eigenspace (see ``_canonical_top_vector``)."""
    w, v = _run(h, want_vectors=True)
    return _canonical_top_vector(w, v)


def eigenspace_projector(h, selector: Literal["top", "nonneg"]) -> np.ndarray:
    """Orthogonal projector built from the spectrum of ``h``.

    ``"top"`` gives the rank-1 projector onto :func:`top_eigenvector`;
    ``"nonneg"`` projects onto all eigenvectors with eigenvalue >= 0, where
    eigenvalues within ``ZERO_EIG_TOL`` of zero count as non-negative.
    """
    w, v = _run(h, want_vectors=True)
    if selector == "top":
        x = _canonical_top_vector(w, v)
        return x[..., :, None] * np.conj(x[..., None, :])
    if selector == "nonneg":
        keep = w >= -ZERO_EIG_TOL * np.maximum(1.0, np.abs(w).max(axis=-1, keepdims=True))
        vk = v * keep[..., None, :]
        return vk @ np.conj(np.swapaxes(vk, -1, -2))
    raise ValidationError(f"unknown selector {selector!r}; expected 'top' or 'nonneg'")
