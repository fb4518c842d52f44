"""Closed-form QRAC strategies.

Anticommuting family: take n pairwise anticommuting Pauli strings A_1..A_n on
m qubits (possible for n <= 2m + 1), decode bit i with the projective
measurement {(I + A_i)/2, (I - A_i)/2} and encode x into

    rho_x = (I + G_x / sqrt(n)) / 2**m,    G_x = sum_i (-1)**x_i A_i .

Since G_x**2 = n I, rho_x is a normalized projector and every bit is
recovered with probability 1/2 + 1/(2 sqrt(n)). For m = 1 this gives the
optimal (2,1) and (3,1) codes.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from .basis import operator_coords
from .errors import UnsupportedConstructionError
from .qrac import BinaryPovmBloch, QracStrategy, bit_table

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]])
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _kron(*ops):
    return reduce(np.kron, ops)


# bit i is read out by the i-th observable
ANTICOMMUTING = {
    1: [_Z, _X, _Y],
    2: [_kron(_X, _I), _kron(_Y, _I), _kron(_Z, _X), _kron(_Z, _Y), _kron(_Z, _Z)],
}


def _observable_measurement(a: np.ndarray, m: int) -> BinaryPovmBloch:
    return BinaryPovmBloch.from_effect(0.5 * (np.eye(2**m) + a), m)


def anticommuting_code(n: int, m: int) -> QracStrategy:
    if m not in ANTICOMMUTING or not 1 <= n <= len(ANTICOMMUTING[m]):
        raise UnsupportedConstructionError(
            f"no anticommuting construction for (n, m) = ({n}, {m}); needs m <= 2 and n <= 2m + 1"
        )
    obs = np.array(ANTICOMMUTING[m][:n])
    signs = 1 - 2 * bit_table(n)
    g = np.einsum("xi,iab->xab", signs, obs)
    enc = operator_coords(g) / (2**m * np.sqrt(n))
    meas = [_observable_measurement(a, m) for a in obs]
    return QracStrategy(n, m, enc, meas)


def perfect_2_2() -> QracStrategy:
    """Computational-basis encoding |x1 x2>, read out with Z (x) I and I (x) Z."""
    enc = []
    for k in range(4):
        rho = np.zeros((4, 4), dtype=complex)
        rho[k, k] = 1.0
        enc.append(operator_coords(rho))
    meas = [_observable_measurement(_kron(_Z, _I), 2), _observable_measurement(_kron(_I, _Z), 2)]
    return QracStrategy(2, 2, np.array(enc), meas)


def construct_known(n: int, m: int) -> QracStrategy:
    """Known analytic strategy for (n, m).

    Supported: (2, 2) perfect code; the anticommuting family for m <= 2,
    n <= 2m + 1 (which covers the optimal (2, 1) and (3, 1) codes).
    """
    if (n, m) == (2, 2):
        return perfect_2_2()
    try:
        return anticommuting_code(n, m)
    except UnsupportedConstructionError:
        raise UnsupportedConstructionError(
            f"no analytic construction for (n, m) = ({n}, {m}); run the see-saw optimizer instead"
        ) from None
