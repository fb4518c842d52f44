"""Geometry of the set of Bloch vectors of N-level states.

The Bloch body sits between the insphere (radius r_N) and the outsphere
(radius R_N), with r_N * R_N = 2/N. Membership is positivity of rho(beta);
every valid beta defines the half-space {z : <z, beta> >= -2/N} and the body
is exactly the intersection of those half-spaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .basis import _check_dim, as_bloch, bloch_to_density, dim_from_length, overlap
from .errors import DegenerateScalingError, ValidationError
from .linalg import eigvalsh, min_eigenvalue
from .tolerances import GEOM_TOL, PSD_TOL


@dataclass(frozen=True)
class GeometryConstants:
    dim: int
    R: float
    r: float

    @property
    def rR(self) -> float:
        """The product r * R, returned as the exact 2/N."""
        return 2.0 / self.dim


def geometry_constants(n: int) -> GeometryConstants:
    """Outsphere radius ``sqrt(2(N-1)/N)`` and insphere radius ``sqrt(2/(N(N-1)))``."""
    n = _check_dim(n)
    return GeometryConstants(n, math.sqrt(2.0 * (n - 1) / n), math.sqrt(2.0 / (n * (n - 1))))


def is_valid_bloch(beta, tol: float = PSD_TOL):
    """True iff rho(beta) has smallest eigenvalue >= -tol. Vectorized over stacks."""
    b = as_bloch(beta)
    ok = min_eigenvalue(bloch_to_density(b)) >= -tol
    return bool(ok) if np.ndim(ok) == 0 else ok


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _require_valid(beta, name: str) -> np.ndarray:
    b = as_bloch(beta)
    if not np.all(is_valid_bloch(b)):
        raise ValidationError(f"{name} is not the Bloch vector of a valid state")
    return b


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise ValidationError(f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]} coordinates")


def halfspace_contains(z, beta):
    """Is ``z`` in the half-space ``<z, beta> >= -2/N`` defined by the valid state ``beta``?

    Broadcasts over leading axes.
    """
    zz = as_bloch(z)
    b = _require_valid(beta, "beta")
    _same_shape(zz, b)
    n = dim_from_length(b.shape[-1])
    ok = np.sum(zz * b, axis=-1) >= -2.0 / n - 1e-12
    return bool(ok) if np.ndim(ok) == 0 else ok


class BoundaryPair(NamedTuple):
    from_max: np.ndarray  # beta / (1 - N lambda_max), lies on the opposite side
    from_min: np.ndarray  # beta / (1 - N lambda_min), same direction as beta


def boundary_scaling(beta) -> BoundaryPair:
    """Rescale ``beta`` onto the boundary along its own line, in both directions.

    With lambda_max >= ... >= lambda_min the spectrum of rho(beta), the spectrum
    of rho(g beta) is (1 - g)/N + g lambda_k. Choosing g = 1/(1 - N lambda_min)
    zeroes the smallest eigenvalue for g > 0, and g = 1/(1 - N lambda_max) does
    the same on the negative side.
    """
    b = _require_valid(beta, "beta")
    if np.any(np.linalg.norm(b, axis=-1) == 0.0):
        raise ValidationError("boundary scaling is undefined for the zero vector")
    n = dim_from_length(b.shape[-1])
    lam = eigvalsh(bloch_to_density(b))
    den_max = 1.0 - n * lam[..., :1]
    den_min = 1.0 - n * lam[..., -1:]
    if np.any(np.abs(den_max) < 1e-10):
        raise DegenerateScalingError("max", float(np.min(np.abs(den_max))))
    if np.any(np.abs(den_min) < 1e-10):
        raise DegenerateScalingError("min", float(np.min(np.abs(den_min))))
    return BoundaryPair(b / den_max, b / den_min)


def boundary_radius(u):
    """Distance from the origin to the boundary along the unit direction ``u``.

    Uses the closed form t* = -1 / (N a_min), a_min the most negative
    eigenvalue of 1/2 sum_i u_i s_i (always negative since that operator is
    traceless and non-zero). Accepts a stack of directions.
    """
    uu = as_bloch(u)
    if np.any(np.abs(np.linalg.norm(uu, axis=-1) - 1.0) > 1e-12):
        raise ValidationError("direction must be a unit vector (|u| = 1 within 1e-12)")
    n = dim_from_length(uu.shape[-1])
    a_min = min_eigenvalue(bloch_to_density(uu) - np.eye(n) / n)
    return _scalar(-1.0 / (n * a_min))


def section_radii(u1, u2, points: int) -> tuple[np.ndarray, np.ndarray]:
    """Boundary radius along cos(t) u1 + sin(t) u2 at t_k = 2 pi k / points.

    This traces the boundary of the body intersected with the plane spanned
    by the orthonormal pair (u1, u2).
    """
    a, b = as_bloch(u1), as_bloch(u2)
    if a.shape != b.shape or a.ndim != 1:
        raise ValidationError("u1 and u2 must be vectors of the same length")
    if abs(np.linalg.norm(a) - 1) > 1e-9 or abs(np.linalg.norm(b) - 1) > 1e-9 or abs(a @ b) > 1e-9:
        raise ValidationError("u1 and u2 must be orthonormal within 1e-9")
    if points < 8:
        raise ValidationError("need at least 8 points")
    thetas = 2.0 * np.pi * np.arange(points) / points
    dirs = np.cos(thetas)[:, None] * a + np.sin(thetas)[:, None] * b
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return thetas, np.atleast_1d(boundary_radius(dirs))


class Midpoint(NamedTuple):
    plus: np.ndarray
    plus_prime: np.ndarray
    degenerate: bool  # True for N = 2, where plus = 0 and plus_prime is set to 0


def midpoint_construction(beta1, beta2) -> Midpoint:
    """Midpoint of two orthogonal pure states and its antipodal boundary partner.

    ``plus = (beta1 + beta2)/2`` has norm sqrt(R^2 - 1); for N > 2 it lies on
    the boundary, and so does ``plus_prime = -(rR / (R^2 - 1)) plus``, which is
    plus rescaled by 1/(1 - N/2) (rho(plus) has eigenvalues 1/2, 1/2, 0, ...).
    """
    b1, b2 = as_bloch(beta1), as_bloch(beta2)
    if b1.shape != b2.shape:
        raise ValidationError("beta1 and beta2 must have the same shape")
    n = dim_from_length(b1.shape[-1])
    g = geometry_constants(n)
    pure = (np.abs(np.linalg.norm(b1, axis=-1) - g.R) <= GEOM_TOL) & (
        np.abs(np.linalg.norm(b2, axis=-1) - g.R) <= GEOM_TOL
    )
    orth = np.abs(overlap(b1, b2)) <= GEOM_TOL
    if not np.all(pure & orth):
        raise ValidationError("midpoint construction needs two orthogonal pure states")
    plus = 0.5 * (b1 + b2)
    if n == 2:
        return Midpoint(plus, np.zeros_like(plus), True)
    return Midpoint(plus, -(g.rR / (g.R**2 - 1.0)) * plus, False)


def pair_distance(beta1, beta2):
    """Half the Euclidean distance between two valid Bloch vectors; never exceeds 1."""
    b1 = _require_valid(beta1, "beta1")
    b2 = _require_valid(beta2, "beta2")
    _same_shape(b1, b2)
    return _scalar(0.5 * np.linalg.norm(b1 - b2, axis=-1))
