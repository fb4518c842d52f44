"""See-saw (alternating) optimization of QRAC strategies.

For fixed encodings the best measurement of bit i is the Helstrom projector
onto the non-negative eigenspace of

    M_i = sum_{x: x_i = 0} rho_x - sum_{x: x_i = 1} rho_x ,

and for fixed measurements the best encoding of x is the top eigenvector of
S_x = sum_i D_i^{x_i}. Alternating the two never lowers the average success.

All restarts are advanced together as one batch. The eigensolver treats each
matrix independently, so a restart's trajectory does not depend on which
other restarts share its batch.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .basis import _check_dim, as_bloch, bloch_to_density, operator_coords
from .errors import ValidationError
from .linalg import eigenspace_projector
from .qrac import BinaryPovmBloch, QracStrategy, _check_m, _check_n, _effects, bit_table
from .sampling import make_rng, random_pure_vector

log = logging.getLogger(__name__)

#: Upper limit on restarts * max_iters.
MAX_WORK = 200_000


@dataclass
class SeesawConfig:
    n: int
    m: int
    restarts: int = 10
    max_iters: int = 1000
    conv_tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        _check_n(self.n)
        _check_m(self.m)
        if self.restarts < 1 or self.max_iters < 1:
            raise ValidationError("restarts and max_iters must be >= 1")
        if not self.conv_tol > 0:
            raise ValidationError("conv_tol must be positive")
        if self.restarts * self.max_iters > MAX_WORK:
            raise ValidationError(f"restarts * max_iters exceeds the cap of {MAX_WORK}")
        make_rng(self.seed)  # validates the seed


@dataclass
class SeesawTrace:
    """Outcome of a see-saw run.

    ``history`` holds p_avg after every half-step of the winning restart;
    ``histories`` has the same for every restart.
    """

    history: list
    winner: int
    strategy: QracStrategy
    final_p: float
    iterations: list = field(default_factory=list)
    histories: list = field(default_factory=list)


def _signs(n: int) -> np.ndarray:
    return 1 - 2 * bit_table(n)


def _helstrom(rho: np.ndarray, n: int) -> np.ndarray:
    """D_i^0 for every bit; rho has shape (..., 2**n, N, N), result (..., n, N, N)."""
    mdiff = np.einsum("xi,...xab->...iab", _signs(n), rho)
    return eigenspace_projector(mdiff, "nonneg")


def _score_operators(d0: np.ndarray, n: int) -> np.ndarray:
    """S_x = sum_i D_i^{x_i} = (#ones in x) I + sum_i (-1)**x_i D_i^0."""
    dim = d0.shape[-1]
    ones = bit_table(n).sum(axis=1).astype(float)
    s = np.einsum("xi,...iab->...xab", _signs(n), d0)
    return s + ones[:, None, None] * np.eye(dim)


def _top_states(s: np.ndarray) -> np.ndarray:
    return eigenspace_projector(s, "top")


def _p_avg(rho: np.ndarray, d0: np.ndarray, n: int) -> np.ndarray:
    q0 = np.einsum("...iab,...xba->...xi", d0, rho).real
    return np.where(bit_table(n) == 0, q0, 1.0 - q0).mean(axis=(-2, -1))


def _to_strategy(rho: np.ndarray, d0: np.ndarray, n: int, m: int) -> QracStrategy:
    enc = operator_coords(rho)
    meas = [BinaryPovmBloch.from_effect(d, m) for d in d0]
    return QracStrategy(n, m, enc, meas)


def optimal_encodings_given_measurements(measurements, n: int, m: int) -> np.ndarray:
    """Pure-state Bloch vectors beta_x maximizing p_avg for fixed measurements."""
    meas = list(measurements)
    if len(meas) != n or any(not isinstance(p, BinaryPovmBloch) or p.m != m for p in meas):
        raise ValidationError(f"need {n} BinaryPovmBloch measurements on {m} qubits")
    QracStrategy(n, m, np.zeros((2**n, 4**m - 1)), meas)  # PSD check of the effects
    d0 = _effects(np.array([p.alpha0 for p in meas]), np.array([p.alpha for p in meas]), m)
    return operator_coords(_top_states(_score_operators(d0, n)))


def optimal_measurements_given_encodings(encodings, n: int, m: int) -> list:
    """Helstrom measurement for every bit given fixed encodings."""
    enc = as_bloch(encodings, 2**m)
    placeholder = [BinaryPovmBloch(m, 0.5, np.zeros(4**m - 1))] * n
    QracStrategy(n, m, enc, placeholder)  # validates the encodings
    d0 = _helstrom(bloch_to_density(enc), n)
    return [BinaryPovmBloch.from_effect(d, m) for d in d0]


def seesaw(cfg: SeesawConfig) -> SeesawTrace:
    n, m = cfg.n, cfg.m
    dim = _check_dim(2**m)
    rho = np.empty((cfg.restarts, 2**n, dim, dim), dtype=complex)
    for k in range(cfg.restarts):
        v = random_pure_vector(make_rng(cfg.seed, k), dim, size=2**n)
        rho[k] = v[:, :, None] * np.conj(v[:, None, :])
    d0 = np.empty((cfg.restarts, n, dim, dim), dtype=complex)

    histories = [[] for _ in range(cfg.restarts)]
    iterations = [0] * cfg.restarts
    active = np.arange(cfg.restarts)
    last = np.full(cfg.restarts, -np.inf)

    for it in range(cfg.max_iters):
        if active.size == 0:
            break
        d0[active] = _helstrom(rho[active], n)
        p_meas = _p_avg(rho[active], d0[active], n)
        rho[active] = _top_states(_score_operators(d0[active], n))
        p_enc = _p_avg(rho[active], d0[active], n)
        keep = []
        for j, k in enumerate(active):
            histories[k].extend([float(p_meas[j]), float(p_enc[j])])
            iterations[k] = it + 1
            if abs(p_enc[j] - last[k]) >= cfg.conv_tol:
                keep.append(k)
            last[k] = p_enc[j]
        active = np.array(keep, dtype=int)

    finals = np.array([h[-1] for h in histories])
    winner = int(np.flatnonzero(finals == finals.max())[0])
    strategy = _to_strategy(rho[winner], d0[winner], n, m)
    log.info("seesaw (%d,%d): best p=%.12g from restart %d", n, m, finals[winner], winner)
    return SeesawTrace(
        history=histories[winner],
        winner=winner,
        strategy=strategy,
        final_p=float(finals[winner]),
        iterations=iterations,
        histories=histories,
    )
