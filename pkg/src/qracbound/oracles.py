"""Randomized brute-force checks of the geometric and QRAC lemmas.

Each campaign draws seeded samples, evaluates the library's implementation
of a statement and records the largest violation. Tolerances are set per
campaign and reported alongside the result.

Sampling:
  * states: ``G G^dagger / Tr`` with complex Gaussian G (full rank), Haar pure
    states, and orthogonal pure pairs from columns of a Haar unitary;
  * POVM effects: Haar eigenbasis with eigenvalues uniform on [0, 1], plus
    Haar-random projectors of every rank;
  * vectors for the sign-sum lemmas: i.i.d. standard Gaussian entries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .basis import bloch_to_density, density_to_bloch, operator_coords, pure_state_bloch
from .errors import ValidationError
from .geometry import (
    boundary_radius,
    boundary_scaling,
    geometry_constants,
    halfspace_contains,
    is_valid_bloch,
    midpoint_construction,
    pair_distance,
)
from .linalg import eigh, eigvalsh, min_eigenvalue
from .qrac import BinaryPovmBloch, is_projective, max_alpha_norm, povm_matrices
from .sampling import (
    make_rng,
    random_density,
    random_povm_element,
    random_projector,
    random_pure_vector,
    random_unitary,
)

STATE_DIMS = (2, 3, 4, 8)
POWER2_DIMS = (2, 4, 8)
VECTOR_COUNTS = tuple(range(1, 11))

TOLERANCES = {
    "hyperplane": 1e-9,
    "uppercomp": 1e-9,
    "obs1": 1e-9,
    "obs3": 1e-9,
    "povm_bound": 1e-9,
    "midpoint": 1e-9,
    "mancinska": 1e-9,
    "parseval": 1e-9,
}
CAMPAIGNS = tuple(TOLERANCES)


@dataclass
class CampaignReport:
    name: str
    samples: int
    max_violation: float
    tolerance: float
    dims: tuple
    failures: int = 0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance and self.failures == 0

    def as_record(self) -> dict:
        return {
            "lemma": self.name,
            "samples": self.samples,
            "dims": list(self.dims),
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "failures": self.failures,
            "passed": self.passed,
            "details": self.details,
        }


# --- sign-sum lemmas ------------------------------------------------------------


def _as_vectors(mus) -> np.ndarray:
    try:
        a = np.array(mus, dtype=float)
    except ValueError:
        raise ValidationError("all vectors must have the same dimension") from None
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or not 1 <= a.shape[0] <= 12:
        raise ValidationError("need between 1 and 12 vectors of a common dimension")
    return a


def _sign_sums(a: np.ndarray) -> np.ndarray:
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=a.shape[0])))
    return signs @ a


class MancinskaResult(NamedTuple):
    lhs: float
    rhs: float
    equality: bool
    gram_offdiag: float


def mancinska_check(mus) -> MancinskaResult:
    """``sum_x |sum_i (-1)**x_i mu_i|`` against ``2**n sqrt(sum_i |mu_i|^2)``.

    Equality holds exactly for pairwise orthogonal vectors; ``equality`` uses
    an absolute 1e-9 threshold, and ``gram_offdiag`` reports the largest
    |<mu_i, mu_j>|, i != j, for cross-checking.
    """
    a = _as_vectors(mus)
    n = a.shape[0]
    lhs = float(np.linalg.norm(_sign_sums(a), axis=1).sum())
    rhs = float(2**n * np.sqrt(np.sum(a * a)))
    gram = a @ a.T
    off = float(np.max(np.abs(gram - np.diag(np.diag(gram))))) if n > 1 else 0.0
    return MancinskaResult(lhs, rhs, abs(lhs - rhs) < 1e-9, off)


def parseval_sign_identity(mus) -> tuple[float, float]:
    """``sum_x |sum_i (-1)**x_i mu_i|^2`` and ``2**n sum_i |mu_i|^2``, which are equal."""
    a = _as_vectors(mus)
    lhs = float(np.sum(_sign_sums(a) ** 2))
    rhs = float(2 ** a.shape[0] * np.sum(a * a))
    return lhs, rhs


# --- state-space campaigns ------------------------------------------------------


def _state_mix(rng, n: int, k: int) -> np.ndarray:
    """Bloch vectors: first half full-rank mixed states, second half pure."""
    k_mixed = k - k // 2
    mixed = density_to_bloch(random_density(rng, n, k_mixed))
    pure = pure_state_bloch(random_pure_vector(rng, n, k // 2))
    return np.concatenate([mixed, pure])


def _orthogonal_pure_pairs(rng, n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    u = random_unitary(rng, n, k)
    return pure_state_bloch(u[..., :, 0]), pure_state_bloch(u[..., :, 1])


def _invalid_points(rng, n: int, k: int) -> np.ndarray:
    """Points just outside the body: valid directions pushed past the boundary radius."""
    g = geometry_constants(n)
    beta = density_to_bloch(random_density(rng, n, k))
    u = beta / np.linalg.norm(beta, axis=1, keepdims=True)
    t = np.atleast_1d(boundary_radius(u))
    # for N = 2 the body is the full outsphere, so go past R there
    hi = np.maximum(g.R, t * 1.01)
    lo = t * (1 + 1e-3)
    s = lo + (hi - lo) * rng.random(k)
    return u * s[:, None]


def _campaign_hyperplane(rng, n, k, det):
    b1, b2 = _state_mix(rng, n, k), _state_mix(rng, n, k)[::-1]
    o1, o2 = _orthogonal_pure_pairs(rng, n, k // 4 + 1)
    b1, b2 = np.concatenate([b1, o1]), np.concatenate([b2, o2])
    margin = np.sum(b1 * b2, axis=1) + 2.0 / n
    inside = halfspace_contains(b2, b1)
    viol = float(max(0.0, -margin.min()))
    fails = int(np.count_nonzero(~inside))

    # converse: the most negative eigenvector of rho(z) gives a separating half-space
    z = _invalid_points(rng, n, k)
    w, v = eigh(bloch_to_density(z))
    psi = v[:, :, -1]
    bpsi = pure_state_bloch(psi)
    sep = np.sum(z * bpsi, axis=1) + 2.0 / n
    contained = halfspace_contains(z, bpsi)
    viol = max(viol, float(max(0.0, sep.max())))
    fails += int(np.count_nonzero(contained))
    # <z, beta_psi> + 2/N equals 2 lambda_min(rho(z))
    viol = max(viol, float(np.max(np.abs(sep - 2.0 * w[:, -1]))))
    det[f"N={n}"] = {"min_margin": float(margin.min()), "max_separation": float(sep.max())}
    return viol, fails, len(b1) + k


def _campaign_uppercomp(rng, n, k, det):
    b1, b2 = _state_mix(rng, n, k), _state_mix(rng, n, k)
    d = np.atleast_1d(pair_distance(b1, b2))
    viol = float(max(0.0, d.max() - 1.0))
    o1, o2 = _orthogonal_pure_pairs(rng, n, k // 4 + 1)
    dsat = np.atleast_1d(pair_distance(o1, o2))
    viol = max(viol, float(np.max(np.abs(dsat - 1.0))))
    det[f"N={n}"] = {"max_distance": float(d.max())}
    return viol, 0, k + len(o1)


def _campaign_obs1(rng, n, k, det):
    beta = density_to_bloch(random_density(rng, n, k))
    out = boundary_scaling(beta)
    lo = min_eigenvalue(bloch_to_density(np.concatenate([out.from_max, out.from_min])))
    viol = float(np.max(np.abs(lo)))
    # -beta sits on the boundary iff lambda_max = 2/N: lambda_min(rho(-beta)) = 2/N - lambda_max
    lam_max = eigvalsh(bloch_to_density(beta))[:, 0]
    neg = min_eigenvalue(bloch_to_density(-beta))
    viol = max(viol, float(np.max(np.abs(neg - (2.0 / n - lam_max)))))
    # states with lambda_max = 2/N exactly: -beta is on the boundary
    m = k // 4 + 1
    # remaining weight 1 - 2/N spread near-uniformly so no entry exceeds 2/N (N <= 16)
    w = rng.dirichlet(np.ones(n - 1), size=m)
    rest = (1.0 - 2.0 / n) * (0.05 * w + 0.95 / (n - 1))
    spectrum = np.concatenate([np.full((m, 1), 2.0 / n), rest], axis=1)
    u = random_unitary(rng, n, m)
    rho = (u * spectrum[:, None, :]) @ np.conj(np.swapaxes(u, -1, -2))
    b = density_to_bloch(0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2))))
    anti = boundary_scaling(b).from_max
    viol = max(viol, float(np.max(np.abs(anti + b))))
    det[f"N={n}"] = {"max_abs_boundary_eig": float(np.max(np.abs(lo)))}
    return viol, 0, k + m


def _check_power2(n: int) -> int:
    m = n.bit_length() - 1
    if n < 2 or 2**m != n:
        raise ValidationError(f"this campaign needs N = 2**m, got N={n}")
    return m


def _campaign_obs3(rng, n, k, det):
    m = _check_power2(n)
    rR = geometry_constants(n).rR
    projs = random_projector(rng, n, n // 2, k)
    viol, fails = 0.0, 0
    for proj in projs:
        p = BinaryPovmBloch.from_effect(proj, m)
        if not is_projective(p):
            fails += 1
        d0, d1 = povm_matrices(p)
        ahat = p.alpha / np.linalg.norm(p.alpha)
        rp = bloch_to_density(np.sqrt(rR) * ahat)
        rm = bloch_to_density(-np.sqrt(rR) * ahat)
        viol = max(
            viol,
            float(np.max(np.abs(rp + rm - rR * np.eye(n)))),
            abs(float(np.trace(rp @ rm).real)),
            abs(float(np.trace(d0 @ d1).real)),
            float(np.max(np.abs(d0 @ d0 - d0))),
            float(np.max(np.abs(d1 @ d1 - d1))),
        )
    lo = min_eigenvalue(
        bloch_to_density(np.sqrt(rR) * np.concatenate([_alpha_hat(projs), -_alpha_hat(projs)]))
    )
    viol = max(viol, float(np.max(np.abs(lo))))
    return viol, fails, k


def _alpha_hat(effects: np.ndarray) -> np.ndarray:
    a = 0.5 * operator_coords(effects)
    return a / np.linalg.norm(a, axis=-1, keepdims=True)


def _campaign_povm_bound(rng, n, k, det):
    m = _check_power2(n)
    rR = geometry_constants(n).rR
    k_proj = k // 2
    effects = np.concatenate(
        [
            random_povm_element(rng, n, k - k_proj),
            np.array([random_projector(rng, n, int(r)) for r in rng.integers(0, n + 1, k_proj)]),
        ]
    )
    alpha0 = np.trace(effects, axis1=1, axis2=2).real / n
    alpha = 0.5 * operator_coords(effects)
    norm = np.linalg.norm(alpha, axis=1)
    viol = max(
        float(max(0.0, -alpha0.min(), alpha0.max() - 1.0)),
        float(np.max(np.maximum(0.0, norm**2 - alpha0 * (1 - alpha0) / rR))),
        float(np.max(np.maximum(0.0, norm - max_alpha_norm(m)))),
    )
    fails = 0
    tight = np.abs(norm - max_alpha_norm(m)) <= 1e-9
    for a0, a, is_tight in zip(alpha0, alpha, tight):
        p = BinaryPovmBloch(m, a0, a)
        if is_tight and not is_projective(p):
            fails += 1
    det[f"N={n}"] = {"saturating_samples": int(tight.sum())}
    return viol, fails, k


def _campaign_midpoint(rng, n, k, det):
    g = geometry_constants(n)
    b1, b2 = _orthogonal_pure_pairs(rng, n, k)
    mp = midpoint_construction(b1, b2)
    norms = np.linalg.norm(mp.plus, axis=1)
    viol = float(np.max(np.abs(norms - np.sqrt(g.R**2 - 1.0))))
    fails = 0
    if n > 2:
        pts = np.concatenate([mp.plus, mp.plus_prime])
        lo = min_eigenvalue(bloch_to_density(pts))
        viol = max(viol, float(np.max(np.abs(lo))))
        fails += int(np.count_nonzero(~np.atleast_1d(is_valid_bloch(pts))))
        # plus_prime lies on both hyperplanes <z, beta_j> = -2/N
        for b in (b1, b2):
            viol = max(viol, float(np.max(np.abs(np.sum(mp.plus_prime * b, axis=1) + 2.0 / n))))
    return viol, fails, k


# --- vector campaigns -----------------------------------------------------------


def _campaign_parseval(rng, count, k, det):
    viol = 0.0
    for _ in range(k):
        d = int(rng.integers(1, 7))
        lhs, rhs = parseval_sign_identity(rng.standard_normal((count, d)))
        viol = max(viol, abs(lhs - rhs))
    return viol, 0, k


def _orthogonal_set(rng, count: int) -> np.ndarray:
    d = count + int(rng.integers(0, 3))
    q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    return rng.uniform(0.5, 2.0, count)[:, None] * q[:, :count].T


def _campaign_mancinska(rng, count, k, det):
    viol, fails = 0.0, 0
    for _ in range(k):
        d = int(rng.integers(1, 7))
        res = mancinska_check(rng.standard_normal((count, d)))
        viol = max(viol, res.lhs - res.rhs, 0.0)
    # equality exactly for orthogonal sets ...
    min_gap = np.inf
    for _ in range(k):
        mus = _orthogonal_set(rng, count)
        res = mancinska_check(mus)
        viol = max(viol, abs(res.lhs - res.rhs))
        fails += int(not res.equality or res.gram_offdiag > 1e-9)
        # ... and strictly below it once one pair has inner product >= 0.1
        if count >= 2:
            i, j = rng.choice(count, size=2, replace=False)
            mus[j] = mus[j] + 0.2 * mus[i] / np.linalg.norm(mus[i])
            res = mancinska_check(mus)
            gap = res.rhs - res.lhs
            min_gap = min(min_gap, gap)
            fails += int(res.equality or gap <= 1e-6 or res.gram_offdiag < 0.1)
    det[f"n={count}"] = {"min_gap_nonorthogonal": None if min_gap == np.inf else float(min_gap)}
    return viol, fails, 3 * k


_RUNNERS = {
    "hyperplane": (_campaign_hyperplane, STATE_DIMS),
    "uppercomp": (_campaign_uppercomp, STATE_DIMS),
    "obs1": (_campaign_obs1, STATE_DIMS),
    "obs3": (_campaign_obs3, POWER2_DIMS),
    "povm_bound": (_campaign_povm_bound, POWER2_DIMS),
    "midpoint": (_campaign_midpoint, STATE_DIMS),
    "mancinska": (_campaign_mancinska, VECTOR_COUNTS),
    "parseval": (_campaign_parseval, VECTOR_COUNTS),
}


def run_campaign(name: str, dims=None, samples: int = 1000, seed: int = 0) -> CampaignReport:
    """Run one campaign.

    ``dims`` are state dimensions N for the geometric campaigns and vector
    counts n for ``mancinska`` / ``parseval``; ``samples`` is per entry of
    ``dims``.
    """
    if name not in _RUNNERS:
        raise ValidationError(f"unknown campaign {name!r}; choose from {', '.join(CAMPAIGNS)}")
    if samples < 1:
        raise ValidationError("samples must be >= 1")
    runner, default_dims = _RUNNERS[name]
    dims = tuple(int(d) for d in (default_dims if dims is None else np.atleast_1d(dims)))
    if name in ("mancinska", "parseval"):
        if any(not 1 <= d <= 12 for d in dims):
            raise ValidationError("vector counts must lie in [1, 12]")
    elif any(not 2 <= d <= 16 for d in dims):
        raise ValidationError("state dimensions must lie in [2, 16]")
    viol, fails, total, details = 0.0, 0, 0, {}
    for idx, d in enumerate(dims):
        v, f, t = runner(make_rng(seed, idx), d, samples, details)
        viol, fails, total = max(viol, v), fails + f, total + t
    return CampaignReport(name, total, viol, TOLERANCES[name], dims, fails, details)
