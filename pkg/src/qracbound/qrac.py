"""(n, m) quantum random access codes in the Bloch picture.

A strategy encodes each n-bit string x into an m-qubit state with Bloch
vector ``beta_x`` (dimension N = 2**m) and decodes bit i with the binary POVM

    D_i^0 = alpha0_i I + sum_j alpha_i[j] s_j,      D_i^1 = I - D_i^0 .

The probability of decoding bit i of x correctly is then
``x_i + (-1)**x_i (alpha0_i + <alpha_i, beta_x>)``.

Bit strings are written x_1 x_2 ... x_n left to right; the encoding stored at
row k belongs to the string whose binary expansion (x_1 most significant) is
k, so the complement of row k is row ``2**n - 1 - k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .basis import _generators, as_bloch, bloch_to_density, operator_coords
from .errors import DegenerateFactorizationError, NumericError, ValidationError
from .geometry import geometry_constants, is_valid_bloch
from .linalg import as_hermitian, min_eigenvalue
from .sampling import (
    make_rng,
    random_density,
    random_povm_element,
    random_projector,
    random_pure_vector,
)
from .tolerances import PSD_TOL

MAX_QUBITS = 4
_EVAL_AGREE_TOL = 1e-12
_CHAIN_SLACK = 1e-12


def _check_m(m: int) -> int:
    if isinstance(m, bool) or int(m) != m or not 1 <= m <= MAX_QUBITS:
        raise ValidationError(f"qubit count m must be an integer in [1, {MAX_QUBITS}], got {m!r}")
    return int(m)


def _check_n(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError(f"bit count n must be a positive integer, got {n!r}")
    return int(n)


def bit_table(n: int) -> np.ndarray:
    """``(2**n, n)`` array of bits; row k is the binary expansion of k, x_1 first."""
    k = np.arange(2**n)[:, None]
    return (k >> np.arange(n - 1, -1, -1)[None, :]) & 1


def bitstring(k: int, n: int) -> str:
    return format(k, f"0{n}b")


@dataclass(frozen=True, eq=False)
class BinaryPovmBloch:
    """Two-outcome POVM on m qubits given by (alpha0, alpha).

    Construction checks the necessary conditions 0 <= alpha0 <= 1 and
    ``|alpha|^2 <= alpha0 (1 - alpha0) / (r R)``; positivity of the two
    effects is checked by :func:`povm_matrices`.
    """

    m: int
    alpha0: float
    alpha: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = _check_m(self.m)
        a = as_bloch(self.alpha, 2**m)
        if a.ndim != 1:
            raise ValidationError("alpha must be a single vector")
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "alpha0", float(self.alpha0))
        a0 = self.alpha0
        if not (-1e-12 <= a0 <= 1 + 1e-12):
            raise ValidationError(f"POVM constraint violated: alpha0 = {a0:.12g} is outside [0, 1]")
        limit = a0 * (1.0 - a0) / geometry_constants(2**m).rR
        norm2 = float(a @ a)
        if norm2 > limit + 1e-9:
            raise ValidationError(
                f"POVM norm bound violated: |alpha|^2 = {norm2:.12g} exceeds "
                f"alpha0 (1 - alpha0) / (r R) = {limit:.12g}; "
                f"|alpha| may never exceed 1/(2 sqrt(r R)) = {max_alpha_norm(m):.12g}"
            )

    @property
    def dim(self) -> int:
        return 2**self.m

    @classmethod
    def from_effect(cls, d0, m: int | None = None) -> "BinaryPovmBloch":
        """Parametrize the POVM {d0, I - d0}: alpha0 = Tr[d0]/N, alpha_j = Tr[d0 s_j]/2."""
        a = as_hermitian(d0, "POVM element")
        n = a.shape[-1]
        if m is None:
            m = int(round(math.log2(n)))
        if 2**m != n:
            raise ValidationError(f"POVM element dimension {n} is not 2**m")
        alpha0 = float(np.trace(a).real) / n
        return cls(m, alpha0, 0.5 * operator_coords(a))


def max_alpha_norm(m: int) -> float:
    """Largest admissible |alpha|, ``1 / (2 sqrt(r R))`` for N = 2**m."""
    return 0.5 / math.sqrt(geometry_constants(2 ** _check_m(m)).rR)


def _effects(alpha0: np.ndarray, alpha: np.ndarray, m: int) -> np.ndarray:
    """Stack of D^0 matrices for arrays alpha0 (...,) and alpha (..., 4**m - 1)."""
    n = 2**m
    d0 = np.tensordot(alpha, _generators(n), axes=([-1], [0]))
    d0 = d0 + np.asarray(alpha0)[..., None, None] * np.eye(n)
    return d0


def povm_matrices(p: BinaryPovmBloch) -> tuple[np.ndarray, np.ndarray]:
    """The effects (D^0, D^1); raises ValidationError if either is not PSD."""
    d0 = _effects(p.alpha0, p.alpha, p.m)
    d1 = np.eye(p.dim) - d0
    lo = min_eigenvalue(np.stack([d0, d1]))
    if lo.min() < -PSD_TOL:
        which = int(np.argmin(lo))
        raise ValidationError(
            f"POVM element D^{which} is not positive semidefinite "
            f"(smallest eigenvalue {lo[which]:.3e})"
        )
    return d0, d1


class PovmFactors(NamedTuple):
    z1: np.ndarray
    z2: np.ndarray
    scale0: float
    scale1: float


def povm_factorize(p: BinaryPovmBloch) -> PovmFactors:
    """Write D^0 = scale0 rho(z1) and D^1 = scale1 rho(z2).

    ``z1 = (r R / alpha0) alpha``, ``z2 = -(alpha0 / (1 - alpha0)) z1``,
    ``scale0 = N alpha0``, ``scale1 = N (1 - alpha0)``. The effects are PSD
    exactly when z1 and z2 are valid Bloch vectors.
    """
    a0 = p.alpha0
    if a0 <= 0.0 or a0 >= 1.0:
        raise DegenerateFactorizationError(
            f"factorization needs 0 < alpha0 < 1, got {a0:.12g} (one POVM element vanishes)"
        )
    rR = geometry_constants(p.dim).rR
    z1 = (rR / a0) * p.alpha
    z2 = -(a0 / (1.0 - a0)) * z1
    return PovmFactors(z1, z2, p.dim * a0, p.dim * (1.0 - a0))


def is_projective(p: BinaryPovmBloch, tol: float = 1e-9) -> bool:
    """True when alpha0 = 1/2 and |alpha| sits at the maximal value 1/(2 sqrt(rR))."""
    return abs(p.alpha0 - 0.5) <= tol and abs(np.linalg.norm(p.alpha) - max_alpha_norm(p.m)) <= tol


@dataclass(eq=False)
class QracStrategy:
    """Encodings ``(2**n, 4**m - 1)`` plus one binary measurement per bit."""

    n: int
    m: int
    encodings: np.ndarray
    measurements: tuple
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.n = _check_n(self.n)
        self.m = _check_m(self.m)
        enc = as_bloch(self.encodings, 2**self.m)
        if enc.shape != (2**self.n, 4**self.m - 1):
            raise ValidationError(
                f"expected {2**self.n} encodings of length {4**self.m - 1}, got shape {enc.shape}"
            )
        self.encodings = enc
        self.measurements = tuple(self.measurements)
        if len(self.measurements) != self.n:
            raise ValidationError(f"expected {self.n} measurements, got {len(self.measurements)}")
        for i, p in enumerate(self.measurements, start=1):
            if not isinstance(p, BinaryPovmBloch) or p.m != self.m:
                raise ValidationError(f"measurement {i} is not a BinaryPovmBloch on {self.m} qubits")
        if self.validate:
            self.check()

    @property
    def dim(self) -> int:
        return 2**self.m

    @property
    def alpha0s(self) -> np.ndarray:
        return np.array([p.alpha0 for p in self.measurements])

    @property
    def alphas(self) -> np.ndarray:
        return np.array([p.alpha for p in self.measurements])

    def check(self) -> None:
        """Full validation: every encoding a state, every POVM element PSD."""
        ok = np.atleast_1d(is_valid_bloch(self.encodings))
        if not ok.all():
            bad = int(np.argmin(ok))
            raise ValidationError(
                f"encoding for x={bitstring(bad, self.n)} is not a valid state "
                "(rho(beta_x) has a negative eigenvalue)"
            )
        d0 = _effects(self.alpha0s, self.alphas, self.m)
        lo = min_eigenvalue(np.concatenate([d0, np.eye(self.dim) - d0]))
        if lo.min() < -PSD_TOL:
            k = int(np.argmin(lo))
            raise ValidationError(
                f"measurement {k % self.n + 1}: POVM element D^{k // self.n} is not positive "
                f"semidefinite (smallest eigenvalue {lo[k]:.3e})"
            )


def _success_bloch(encodings, alpha0s, alphas) -> np.ndarray:
    """Success table ``(..., 2**n, n)`` from Bloch data; supports leading batch axes."""
    n = alphas.shape[-2]
    q0 = alpha0s[..., None, :] + encodings @ np.swapaxes(alphas, -1, -2)
    bits = bit_table(n)
    return np.where(bits == 0, q0, 1.0 - q0)


def success_table(s: QracStrategy) -> np.ndarray:
    """``table[x, i]`` = probability that bit i of x is decoded correctly (Bloch form)."""
    return _success_bloch(s.encodings, s.alpha0s, s.alphas)


def success_table_matrix(s: QracStrategy) -> np.ndarray:
    """Same table computed from the density and effect matrices."""
    rho = bloch_to_density(s.encodings)
    d0 = _effects(s.alpha0s, s.alphas, s.m)
    q0 = np.einsum("ijk,xkj->xi", d0, rho).real
    return np.where(bit_table(s.n) == 0, q0, 1.0 - q0)


def avg_success(s: QracStrategy) -> float:
    """Average over uniform (x, i) of the success probability, cross-checked two ways."""
    a = float(success_table(s).mean())
    b = float(success_table_matrix(s).mean())
    if abs(a - b) > _EVAL_AGREE_TOL:
        raise NumericError(f"Bloch-form and matrix-form success disagree: {a!r} vs {b!r}")
    return a


def worst_case_success(s: QracStrategy) -> float:
    return float(success_table(s).min())


def xor_randomized_worst_case(s: QracStrategy) -> float:
    """Success of the shared-randomness (XOR-masked) protocol in its worst bit.

    Masking x with a uniformly random string y makes every input behave like
    the average over y, so the guarantee is min_i of the per-bit average.
    """
    return float(success_table(s).mean(axis=0).min())


class Bound(NamedTuple):
    value: float
    vacuous: bool


def upper_bound_info(n: int, m: int) -> Bound:
    """``1/2 + 1/2 sqrt(2**(m-1) / n)``; flagged vacuous when it is >= 1."""
    n, m = _check_n(n), _check_m(m)
    closed = 0.5 + 0.5 * math.sqrt(2.0 ** (m - 1) / n)
    via_radii = 0.5 + 0.5 * math.sqrt(1.0 / (n * geometry_constants(2**m).rR))
    if abs(closed - via_radii) > 1e-15:
        raise NumericError(f"bound forms disagree: {closed!r} vs {via_radii!r}")
    return Bound(closed, closed >= 1.0)


def upper_bound(n: int, m: int) -> float:
    return upper_bound_info(n, m).value


@dataclass
class EvaluationReport:
    p_avg: float
    p_worst: float
    per_pair: dict
    bound: float
    decomposition_terms: dict
    stages: tuple  # (S1, S2, S3, S4, S5)
    n: int
    m: int

    @property
    def stage_probabilities(self) -> tuple:
        """Each stage mapped to 1/2 + S_k / (n 2**n), the scale of p_avg and the bound."""
        scale = self.n * 2**self.n
        return tuple(0.5 + sk / scale for sk in self.stages)

    def chain_holds(self, slack: float = _CHAIN_SLACK) -> bool:
        st = self.stages
        return all(st[k] <= st[k + 1] + slack for k in range(len(st) - 1))


def proof_chain(s: QracStrategy) -> tuple[tuple, np.ndarray]:
    """Stages S1 <= ... <= S5 of the bound's derivation and the norms |T_x|.

    T_x = sum_i (-1)**x_i alpha_i. Then
    S1 = sum_x 1/2 <T_x, beta_x - beta_xbar>      (p_avg = 1/2 + S1 / (n 2**n)),
    S2 = sum_x 1/2 |T_x| |beta_x - beta_xbar|,
    S3 = sum_x |T_x|,
    S4 = 2**n sqrt(sum_i |alpha_i|^2),
    S5 = 2**n sqrt(n / (4 r R)).
    """
    signs = 1 - 2 * bit_table(s.n)
    t = signs @ s.alphas
    diff = s.encodings - s.encodings[::-1]
    tnorm = np.linalg.norm(t, axis=1)
    s1 = 0.5 * float(np.sum(t * diff))
    s2 = 0.5 * float(np.sum(tnorm * np.linalg.norm(diff, axis=1)))
    s3 = float(np.sum(tnorm))
    s4 = 2**s.n * math.sqrt(float(np.sum(s.alphas**2)))
    s5 = 2**s.n * math.sqrt(s.n / (4.0 * geometry_constants(s.dim).rR))
    return (s1, s2, s3, s4, s5), tnorm


def avg_success_decomposed(s: QracStrategy) -> EvaluationReport:
    table = success_table(s)
    p = avg_success(s)
    stages, tnorm = proof_chain(s)
    p_dec = 0.5 + stages[0] / (s.n * 2**s.n)
    if abs(p_dec - p) > _EVAL_AGREE_TOL:
        raise NumericError(f"decomposed success {p_dec!r} disagrees with direct value {p!r}")
    per_pair = {
        (bitstring(k, s.n), i + 1): float(table[k, i]) for k in range(2**s.n) for i in range(s.n)
    }
    terms = {bitstring(k, s.n): float(tnorm[k]) for k in range(2**s.n)}
    return EvaluationReport(
        p_avg=p,
        p_worst=float(table.min()),
        per_pair=per_pair,
        bound=upper_bound(s.n, s.m),
        decomposition_terms=terms,
        stages=stages,
        n=s.n,
        m=s.m,
    )


def simulate(s: QracStrategy, trials: int, seed: int) -> float:
    """Monte-Carlo estimate of the average success with uniformly drawn (x, i)."""
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise ValidationError(f"trials must be a positive integer, got {trials!r}")
    rng = make_rng(seed)
    q0 = s.alpha0s[None, :] + s.encodings @ s.alphas.T
    # snap round-off so certain outcomes stay certain
    q0 = np.clip(q0, 0.0, 1.0)
    q0 = np.where(q0 > 1.0 - 1e-12, 1.0, np.where(q0 < 1e-12, 0.0, q0))
    bits = bit_table(s.n)
    done, hits, chunk = 0, 0, 1 << 20
    while done < trials:
        k = min(chunk, trials - done)
        x = rng.integers(0, 2**s.n, size=k)
        i = rng.integers(0, s.n, size=k)
        outcome = (rng.random(k) >= q0[x, i]).astype(int)
        hits += int(np.count_nonzero(outcome == bits[x, i]))
        done += k
    return hits / trials


def random_strategy(rng: np.random.Generator, n: int, m: int, pure_fraction: float = 0.5) -> QracStrategy:
    """Random valid strategy.

    Each encoding is pure with probability ``pure_fraction`` (else full-rank
    mixed); each measurement is, with the same probability, a Haar-random
    rank-N/2 projector, else a random effect with uniform eigenvalues.
    """
    dim = 2 ** _check_m(m)
    k = 2 ** _check_n(n)
    pure = rng.random(k) < pure_fraction
    rho = random_density(rng, dim, k)
    v = random_pure_vector(rng, dim, k)
    rho[pure] = (v[:, :, None] * np.conj(v[:, None, :]))[pure]
    effects = random_povm_element(rng, dim, n)
    proj = rng.random(n) < pure_fraction
    effects[proj] = random_projector(rng, dim, dim // 2, n)[proj]
    meas = [BinaryPovmBloch.from_effect(d, m) for d in effects]
    return QracStrategy(n, m, operator_coords(rho), meas)
