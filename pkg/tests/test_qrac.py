import numpy as np
import pytest

from qracbound.basis import bloch_to_density
from qracbound.constructions import anticommuting_code, construct_known
from qracbound.errors import DegenerateFactorizationError, UnsupportedConstructionError, ValidationError
from qracbound.geometry import is_valid_bloch
from qracbound.linalg import min_eigenvalue
from qracbound.qrac import (
    BinaryPovmBloch,
    QracStrategy,
    avg_success,
    avg_success_decomposed,
    bit_table,
    is_projective,
    max_alpha_norm,
    povm_factorize,
    povm_matrices,
    random_strategy,
    simulate,
    success_table,
    success_table_matrix,
    upper_bound,
    upper_bound_info,
    worst_case_success,
    xor_randomized_worst_case,
)
from qracbound.sampling import make_rng, random_povm_element, random_projector

Z3 = np.array([0, 0, 0.5])
X3 = np.array([0.5, 0, 0])
COIN1 = BinaryPovmBloch(1, 0.5, np.zeros(3))


def pauli_direction(m, k, norm):
    a = np.zeros(4**m - 1)
    a[k] = norm
    return a


def test_povm_examples():
    d0, d1 = povm_matrices(COIN1)
    np.testing.assert_array_equal(d0, np.eye(2) / 2)
    np.testing.assert_array_equal(d1, np.eye(2) / 2)
    d0, d1 = povm_matrices(BinaryPovmBloch(1, 0.5, Z3))
    np.testing.assert_allclose(d0, np.diag([1, 0]), atol=1e-15)
    np.testing.assert_allclose(d1, np.diag([0, 1]), atol=1e-15)
    # m = 2 Pauli direction Z (x) I, spectrum (1, 1, -1, -1)
    zi = np.diag([1.0, 1.0, -1.0, -1.0])
    p = BinaryPovmBloch.from_effect(0.5 * (np.eye(4) + zi), 2)
    assert abs(np.linalg.norm(p.alpha) - 1 / np.sqrt(2)) < 1e-12
    d0, _ = povm_matrices(p)
    np.testing.assert_allclose(np.linalg.eigvalsh(d0), [0, 0, 1, 1], atol=1e-12)


def test_povm_properties(rng):
    for m in (1, 2, 3):
        for d in random_povm_element(rng, 2**m, 20):
            p = BinaryPovmBloch.from_effect(d, m)
            d0, d1 = povm_matrices(p)
            assert np.array_equal(d0 + d1, np.eye(2**m)) or np.abs(d0 + d1 - np.eye(2**m)).max() < 1e-15
            assert abs(np.trace(d0).real - p.alpha0 * 2**m) < 1e-12
            np.testing.assert_allclose(d0, d, atol=1e-12)


def test_alpha_norm_bound_rejected():
    with pytest.raises(ValidationError, match="norm bound"):
        BinaryPovmBloch(1, 0.5, [0, 0, 0.6])
    with pytest.raises(ValidationError, match=r"\[0, 1\]"):
        BinaryPovmBloch(1, 1.2, np.zeros(3))
    with pytest.raises(ValidationError):
        BinaryPovmBloch(1, 0.5, np.zeros(8))


def test_psd_checked_after_bloch_inequality():
    # within the norm bound, but D^0 has a negative eigenvalue
    d3 = np.zeros(15)
    d3[14] = 1 / np.sqrt(2)
    p = BinaryPovmBloch(2, 0.5, d3)
    with pytest.raises(ValidationError, match="positive semidefinite"):
        povm_matrices(p)


def test_factorize_examples():
    f = povm_factorize(BinaryPovmBloch(1, 0.5, Z3))
    np.testing.assert_allclose(f.z1, [0, 0, 1], atol=1e-15)
    np.testing.assert_allclose(f.z2, [0, 0, -1], atol=1e-15)
    f = povm_factorize(BinaryPovmBloch(2, 0.3, np.zeros(15)))
    np.testing.assert_array_equal(f.z1, 0)
    np.testing.assert_array_equal(f.z2, 0)
    assert f.scale0 == pytest.approx(4 * 0.3) and f.scale1 == pytest.approx(4 * 0.7)
    for a0 in (0.0, 1.0):
        with pytest.raises(DegenerateFactorizationError):
            povm_factorize(BinaryPovmBloch(1, a0, np.zeros(3)))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_factorize_reconstructs(rng, m):
    for d in random_povm_element(rng, 2**m, 50):
        p = BinaryPovmBloch.from_effect(d, m)
        f = povm_factorize(p)
        d0, d1 = povm_matrices(p)
        assert np.abs(f.scale0 * bloch_to_density(f.z1) - d0).max() < 1e-12
        assert np.abs(f.scale1 * bloch_to_density(f.z2) - d1).max() < 1e-12
        assert is_valid_bloch(f.z1) and is_valid_bloch(f.z2)


def test_factorize_psd_equivalence():
    # a Bloch-admissible parameter set whose D^0 is not PSD gives an invalid z1
    a = np.zeros(15)
    a[14] = 1 / np.sqrt(2)
    f = povm_factorize(BinaryPovmBloch(2, 0.5, a))
    assert not is_valid_bloch(f.z1)


def test_is_projective_examples():
    assert is_projective(BinaryPovmBloch(1, 0.5, Z3))
    assert not is_projective(COIN1)
    zi = np.diag([1.0, 1.0, -1.0, -1.0])
    p = BinaryPovmBloch.from_effect(0.5 * (np.eye(4) + zi), 2)
    assert is_projective(p)
    d0, d1 = povm_matrices(p)
    assert abs(np.trace(d0 @ d1)) < 1e-9
    np.testing.assert_allclose(d0 @ d0, d0, atol=1e-9)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_projectors_saturate_and_sit_on_boundary(rng, m):
    n = 2**m
    for d in random_projector(rng, n, n // 2, 20):
        p = BinaryPovmBloch.from_effect(d, m)
        assert is_projective(p)
        assert abs(np.linalg.norm(p.alpha) - max_alpha_norm(m)) < 1e-9
        d0, d1 = povm_matrices(p)
        assert abs(np.trace(d0 @ d1).real) < 1e-9
        rR = 2 / n
        ahat = p.alpha / np.linalg.norm(p.alpha)
        for sign in (1, -1):
            pt = sign * np.sqrt(rR) * ahat
            assert abs(min_eigenvalue(bloch_to_density(pt))) < 1e-9


def test_random_povms_respect_norm_bound(rng):
    for m in (1, 2, 3):
        for d in random_povm_element(rng, 2**m, 200):
            p = BinaryPovmBloch.from_effect(d, m)
            assert np.linalg.norm(p.alpha) <= max_alpha_norm(m) + 1e-9
            assert p.alpha @ p.alpha <= p.alpha0 * (1 - p.alpha0) / (2 / 2**m) + 1e-9


def test_upper_bound_values():
    assert abs(upper_bound(3, 2) - (0.5 + 1 / np.sqrt(6))) < 1e-12
    assert abs(upper_bound(4, 2) - 0.8535533906) < 1e-10
    assert abs(upper_bound(6, 2) - 0.7886751346) < 1e-10
    b = upper_bound_info(2, 2)
    assert b.value == 1.0 and b.vacuous
    assert not upper_bound_info(3, 2).vacuous
    assert upper_bound_info(1, 3).value > 1 and upper_bound_info(1, 3).vacuous
    for n, m in [(0, 1), (2, 0), (2, 5)]:
        with pytest.raises(ValidationError):
            upper_bound(n, m)


def test_bit_convention():
    np.testing.assert_array_equal(bit_table(2), [[0, 0], [0, 1], [1, 0], [1, 1]])


def qubit_21():
    r = 1 / np.sqrt(2)
    enc = np.array([[r, 0, r], [-r, 0, r], [r, 0, -r], [-r, 0, -r]])
    return QracStrategy(2, 1, enc, [BinaryPovmBloch(1, 0.5, Z3), BinaryPovmBloch(1, 0.5, X3)])


def test_avg_success_examples():
    assert avg_success(construct_known(2, 2)) == 1.0
    assert abs(avg_success(qubit_21()) - 0.8535533906) < 1e-10
    s = QracStrategy(2, 1, np.zeros((4, 3)), qubit_21().measurements)
    assert avg_success(s) == 0.5


def test_worst_case_examples():
    assert abs(worst_case_success(qubit_21()) - 0.8535533906) < 1e-10
    assert worst_case_success(construct_known(2, 2)) == 1.0
    s = qubit_21()
    s2 = QracStrategy(2, 1, s.encodings, [s.measurements[0], COIN1])
    assert success_table(s2)[:, 1].max() <= 0.5 + 1e-12


def test_xor_randomized_examples():
    assert abs(xor_randomized_worst_case(qubit_21()) - 0.8535533906) < 1e-10
    assert xor_randomized_worst_case(construct_known(2, 2)) == 1.0
    perfect = construct_known(2, 2)
    s = QracStrategy(2, 2, perfect.encodings, [perfect.measurements[0], BinaryPovmBloch(2, 0.5, np.zeros(15))])
    assert xor_randomized_worst_case(s) == 0.5


def test_decomposition_saturates_for_qubit_code():
    rep = avg_success_decomposed(qubit_21())
    assert rep.chain_holds()
    assert max(rep.stages) - min(rep.stages) < 1e-12
    assert abs(rep.p_avg - rep.bound) < 1e-12
    assert set(rep.decomposition_terms) == {"00", "01", "10", "11"}
    assert rep.per_pair[("01", 2)] == pytest.approx(0.8535533906, abs=1e-10)


def test_decomposition_zero_encodings():
    s = QracStrategy(2, 1, np.zeros((4, 3)), qubit_21().measurements)
    rep = avg_success_decomposed(s)
    assert rep.stages[0] == 0 and rep.p_avg == 0.5


@pytest.mark.parametrize("n,m", [(2, 1), (3, 1), (4, 1), (3, 2), (4, 2), (6, 2), (3, 3)])
def test_random_strategy_invariants(n, m):
    rng = make_rng(7, n * 10 + m)
    bound = upper_bound(n, m)
    for _ in range(80):
        s = random_strategy(rng, n, m)
        assert np.abs(success_table(s) - success_table_matrix(s)).max() < 1e-12
        rep = avg_success_decomposed(s)
        assert rep.chain_holds(1e-12)
        assert rep.p_worst <= rep.p_avg <= bound + 1e-9
        assert xor_randomized_worst_case(s) <= bound + 1e-9


def test_invalid_encoding_rejected():
    s = qubit_21()
    enc = s.encodings.copy()
    enc[2] = [0, 0, 1.2]
    with pytest.raises(ValidationError, match="x=10"):
        QracStrategy(2, 1, enc, s.measurements)
    with pytest.raises(ValidationError):
        QracStrategy(2, 1, enc[:3], s.measurements)
    with pytest.raises(ValidationError):
        QracStrategy(2, 1, s.encodings, s.measurements[:1])


def test_simulate_perfect_code_exact():
    assert simulate(construct_known(2, 2), 10_000, 3) == 1.0


def test_simulate_deterministic_and_close():
    s = qubit_21()
    a = simulate(s, 200_000, 11)
    assert a == simulate(s, 200_000, 11)
    assert a != simulate(s, 200_000, 12)
    assert abs(a - 0.8535533906) < 3 * np.sqrt(0.15 / 200_000) * 1.5


@pytest.mark.parametrize("trials", [0, -5, 2.5])
def test_simulate_rejects_bad_trials(trials):
    with pytest.raises(ValidationError):
        simulate(qubit_21(), trials, 0)


def test_known_constructions():
    assert abs(avg_success(construct_known(2, 1)) - upper_bound(2, 1)) < 1e-12
    assert abs(avg_success(construct_known(3, 1)) - upper_bound(3, 1)) < 1e-12
    assert avg_success(construct_known(2, 2)) == 1.0
    for n in range(1, 6):
        p = avg_success(anticommuting_code(n, 2))
        assert abs(p - (0.5 + 0.5 / np.sqrt(n))) < 1e-9
    p32 = avg_success(construct_known(3, 2))
    assert abs(p32 - 0.7886751346) < 1e-10 and p32 < upper_bound(3, 2)


@pytest.mark.parametrize("n,m", [(4, 1), (6, 2), (2, 3)])
def test_unsupported_construction(n, m):
    with pytest.raises(UnsupportedConstructionError, match="see-saw"):
        construct_known(n, m)
