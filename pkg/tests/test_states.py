import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbroadcast.errors import DimensionMismatch, DomainError, InvalidState
from qbroadcast.states import (
    BlochState,
    bell_diagonal,
    bell_eigenvalues,
    from_bloch,
    is_valid_bell,
    maximally_mixed,
    pure_schmidt,
    random_bloch_state,
    random_density_matrix,
    require_valid,
    to_bloch,
    validate,
    werner_like,
)

unit = st.floats(0.0, 1.0)


def test_round_trip_random(rng):
    for _ in range(50):
        rho = random_density_matrix(rng)
        np.testing.assert_allclose(from_bloch(to_bloch(rho)), rho, atol=1e-14)


def test_bloch_round_trip_is_exact_on_components(rng):
    s = random_bloch_state(rng)
    assert to_bloch(from_bloch(s)).max_abs_diff(s) < 1e-14


def test_phi_plus():
    s = BlochState(np.zeros(3), np.zeros(3), np.diag([1.0, -1.0, 1.0]))
    rho = from_bloch(s)
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(rho, np.outer(phi, phi), atol=1e-15)


def test_maximally_mixed():
    np.testing.assert_allclose(from_bloch(maximally_mixed()), np.eye(4) / 4)


def test_bad_shapes():
    with pytest.raises(DimensionMismatch):
        BlochState(np.zeros(2), np.zeros(3), np.zeros((3, 3)))
    with pytest.raises(DimensionMismatch):
        to_bloch(np.eye(3) / 3)


def test_arrays_are_read_only():
    s = maximally_mixed()
    with pytest.raises(ValueError):
        s.x[0] = 1.0


def test_validate_reports():
    rep = validate(np.eye(4) / 4)
    assert rep.valid and rep.min_eigenvalue == pytest.approx(0.25)
    bad = from_bloch(BlochState(np.zeros(3), np.zeros(3), np.eye(3)))  # T = I is not positive
    rep = validate(bad)
    assert not rep.valid
    assert rep.min_eigenvalue == pytest.approx(-0.5)
    with pytest.raises(InvalidState):
        require_valid(bad)


def test_validate_flags_trace_and_hermiticity():
    assert not validate(np.eye(4) / 2).valid
    m = np.eye(4, dtype=complex) / 4
    m[0, 1] = 1e-6
    assert validate(m).hermiticity_error == pytest.approx(1e-6)


@given(p=unit, a=unit)
@settings(max_examples=60, deadline=None)
def test_werner_like_is_valid(p, a):
    rho = from_bloch(werner_like(p, a))
    assert validate(rho).valid


def test_werner_like_matches_mixture():
    p, a = 0.7, 0.3
    psi = np.array([np.sqrt(a), 0, 0, np.sqrt(1 - a)])
    expected = p * np.outer(psi, psi) + (1 - p) * np.eye(4) / 4
    np.testing.assert_allclose(from_bloch(werner_like(p, a)), expected, atol=1e-15)


def test_werner_domain():
    with pytest.raises(DomainError):
        werner_like(1.2, 0.5)
    with pytest.raises(DomainError):
        pure_schmidt(-0.1)


def test_pure_schmidt_is_pure():
    rho = from_bloch(pure_schmidt(0.3))
    np.testing.assert_allclose(rho @ rho, rho, atol=1e-14)


def test_bell_eigenvalues_vertices():
    # each vertex of the tetrahedron is a single Bell state
    for c in ([-1, -1, -1], [1, 1, -1], [1, -1, 1], [-1, 1, 1]):
        lam = bell_eigenvalues(c)
        assert sorted(lam) == pytest.approx([0, 0, 0, 1])
        rho = from_bloch(bell_diagonal(c))
        np.testing.assert_allclose(rho @ rho, rho, atol=1e-14)


def test_bell_eigenvalues_match_spectrum(rng):
    for _ in range(20):
        c = rng.uniform(-1, 1, 3)
        if not is_valid_bell(c):
            continue
        ev = np.linalg.eigvalsh(from_bloch(bell_diagonal(c)))
        np.testing.assert_allclose(np.sort(bell_eigenvalues(c)), ev, atol=1e-14)


def test_bell_invalid():
    with pytest.raises(InvalidState):
        bell_diagonal([1, 1, 1])
    assert not is_valid_bell([1, 1, 1])
    np.testing.assert_array_equal(is_valid_bell(np.array([[1, 1, 1], [0, 0, 0]])), [False, True])


def test_swapped():
    s = to_bloch(random_density_matrix(np.random.default_rng(3)))
    rho = from_bloch(s).reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
    np.testing.assert_allclose(from_bloch(s.swapped()), rho, atol=1e-15)


def test_to_bloch_product_state():
    rho = np.zeros((4, 4))
    rho[0, 0] = 1
    s = to_bloch(rho)
    np.testing.assert_allclose(s.x, [0, 0, 1], atol=1e-15)
    np.testing.assert_allclose(s.y, [0, 0, 1], atol=1e-15)
    np.testing.assert_allclose(s.T, np.diag([0, 0, 1]), atol=1e-15)


def test_werner_like_components():
    s = werner_like(1, 0.2)
    np.testing.assert_allclose(s.x, [0, 0, -0.6], atol=1e-15)
    np.testing.assert_allclose(s.T, np.diag([0.8, -0.8, 1]), atol=1e-15)
    assert werner_like(0, 0.7).allclose(maximally_mixed())


def test_pure_schmidt_is_werner_at_p_one(rng):
    for s in rng.uniform(0, 1, 100):
        assert pure_schmidt(s).allclose(werner_like(1, s), atol=0)


@given(c=st.lists(st.floats(-1, 1), min_size=3, max_size=3))
@settings(max_examples=100, deadline=None)
def test_bell_eigenvalues_sum_to_one(c):
    assert bell_eigenvalues(c).sum() == pytest.approx(1, abs=1e-15)


def test_spectrum_survives_round_trip(rng):
    for _ in range(20):
        rho = random_density_matrix(rng, 4, int(rng.integers(1, 5)))
        np.testing.assert_allclose(
            np.linalg.eigvalsh(from_bloch(to_bloch(rho))), np.linalg.eigvalsh(rho), atol=1e-10
        )
