import numpy as np
import pytest

from qbroadcast.cloning import (
    ClonerSpec,
    Dependence,
    Locality,
    build_bh_unitary,
    build_sd_local_unitary,
    clone_closed_form,
    clone_oracle,
    clone_oracle_sd_local,
    partial_trace,
    sd_machine_vectors,
)
from qbroadcast.errors import SpecError
from qbroadcast.states import BlochState, from_bloch, random_bloch_state, validate, werner_like

PHI_PLUS = BlochState(np.zeros(3), np.zeros(3), np.diag([1.0, -1.0, 1.0]))


def test_spec_validation():
    with pytest.raises(SpecError):
        ClonerSpec(Locality.LOCAL, Dependence.DEPENDENT)
    with pytest.raises(SpecError):
        ClonerSpec(Locality.LOCAL, Dependence.INDEPENDENT, 0.2)
    with pytest.raises(SpecError):
        ClonerSpec.sd("nonlocal", 0.3)
    with pytest.raises(SpecError):
        ClonerSpec("sideways")
    assert ClonerSpec.sd("local", 1 / 6).reduces_to_independent
    assert ClonerSpec.sd("nonlocal", 0.1).reduces_to_independent


def test_shrink_factors():
    assert ClonerSpec.si("local").mu == pytest.approx(2 / 3)
    assert ClonerSpec.si("nonlocal").mu == pytest.approx(3 / 5)
    c, d = ClonerSpec.si("local").amplitudes
    assert c**2 == pytest.approx(2 / 3) and d**2 == pytest.approx(1 / 6)
    c, d = ClonerSpec.si("nonlocal").amplitudes
    assert c**2 == pytest.approx(2 / 5) and d**2 == pytest.approx(1 / 10)


@pytest.mark.parametrize("loc", list(Locality))
def test_unitary_is_unitary(loc):
    U = build_bh_unitary(ClonerSpec.si(loc))
    np.testing.assert_allclose(U.conj().T @ U, np.eye(len(U)), atol=1e-12)


def test_phi_plus_local_outputs():
    out = clone_closed_form(PHI_PLUS, ClonerSpec.si("local"))
    np.testing.assert_allclose(out["14"].T, np.diag([4, -4, 4]) / 9, atol=1e-15)
    np.testing.assert_allclose(out["13"].T, np.eye(3) / 3, atol=1e-15)


def test_phi_plus_nonlocal_outputs():
    out = clone_closed_form(PHI_PLUS, ClonerSpec.si("nonlocal"))
    np.testing.assert_allclose(out["12"].T, np.diag([3, -3, 3]) / 5, atol=1e-15)
    np.testing.assert_allclose(out["13"].T, np.eye(3) / 5, atol=1e-15)


@pytest.mark.parametrize("loc", list(Locality))
def test_oracle_matches_closed_form(rng, loc):
    spec = ClonerSpec.si(loc)
    U = build_bh_unitary(spec)
    for _ in range(20):
        s = random_bloch_state(rng)
        assert clone_closed_form(s, spec).max_abs_diff(clone_oracle(s, spec, U)) < 1e-12


@pytest.mark.parametrize("lam", [1 / 6, 0.2, 0.3, 0.5])
def test_sd_local_oracle(rng, lam):
    spec = ClonerSpec.sd("local", lam)
    for _ in range(5):
        s = random_bloch_state(rng)
        assert clone_closed_form(s, spec).max_abs_diff(clone_oracle_sd_local(s, lam)) < 1e-12


def test_sd_local_unitary_is_unitary():
    U = build_sd_local_unitary(0.3)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(len(U)), atol=1e-12)


def test_sd_machine_needs_realisable_lambda():
    with pytest.raises(SpecError):
        sd_machine_vectors(0.1)


def test_sd_at_independent_point_matches_universal(rng):
    s = random_bloch_state(rng)
    a = clone_closed_form(s, ClonerSpec.sd("local", 1 / 6))
    b = clone_closed_form(s, ClonerSpec.si("local"))
    assert a.max_abs_diff(b) < 1e-15
    a = clone_closed_form(s, ClonerSpec.sd("nonlocal", 0.1))
    b = clone_closed_form(s, ClonerSpec.si("nonlocal"))
    assert a.max_abs_diff(b) < 1e-15


def test_oracle_rejects_sd():
    with pytest.raises(SpecError):
        clone_oracle(PHI_PLUS, ClonerSpec.sd("local", 0.3))


@pytest.mark.parametrize("loc", list(Locality))
def test_outputs_are_states(rng, loc):
    spec = ClonerSpec.si(loc)
    for _ in range(20):
        out = clone_closed_form(random_bloch_state(rng), spec)
        for p in out.pairs.values():
            assert validate(from_bloch(p)).valid


def test_sd_outputs_valid_for_axial_inputs():
    # inputs with Bloch vectors along z stay physical down to lambda = 0
    for lam in np.linspace(0, 0.5, 11):
        out = clone_closed_form(werner_like(0.9, 0.3), ClonerSpec.sd("local", lam))
        assert all(validate(from_bloch(p)).valid for p in out.pairs.values())


def test_partial_trace_of_product(rng):
    from qbroadcast.states import random_density_matrix

    a, b, c = (random_density_matrix(rng, 2) for _ in range(3))
    rho = np.kron(np.kron(a, b), c)
    np.testing.assert_allclose(partial_trace(rho, [2, 2, 2], [0, 2]), np.kron(a, c), atol=1e-14)
    np.testing.assert_allclose(partial_trace(rho, [2, 2, 2], [2, 0]), np.kron(c, a), atol=1e-14)


def test_partial_trace_examples():
    phi = np.zeros(4)
    phi[[0, 3]] = 1 / np.sqrt(2)
    rho = np.outer(phi, phi)
    np.testing.assert_allclose(partial_trace(rho, [2, 2], [0]), np.eye(2) / 2, atol=1e-15)
    np.testing.assert_array_equal(partial_trace(rho, [2, 2], [0, 1]), rho)
    ket01 = np.zeros((4, 4))
    ket01[1, 1] = 1
    np.testing.assert_array_equal(partial_trace(ket01, [2, 2], [1]), np.diag([0, 1]))


def test_partial_trace_dimension_check():
    from qbroadcast.errors import DimensionMismatch

    with pytest.raises(DimensionMismatch):
        partial_trace(np.eye(4) / 4, [2, 3], [0])


def test_unitary_amplitudes():
    U = build_bh_unitary(ClonerSpec.si("local"))
    col = U[:, 0]  # |0>|0>|X> -> sqrt(2/3)|00>|X11> + sqrt(1/6)(|01>+|10>)|X22>
    assert col[0] == pytest.approx(np.sqrt(2 / 3))
    assert col[0b011] == pytest.approx(np.sqrt(1 / 6)) and col[0b101] == pytest.approx(np.sqrt(1 / 6))
    U = build_bh_unitary(ClonerSpec.si("nonlocal"))
    col = U[:, 0]
    assert col[0] == pytest.approx(np.sqrt(2 / 5))
    for j in range(1, 4):
        assert col[j * 4 + j] == pytest.approx(np.sqrt(1 / 10))  # |0>|j>|X_jj>
        assert col[j * 16 + j] == pytest.approx(np.sqrt(1 / 10))  # |j>|0>|X_jj>
    np.testing.assert_allclose(U.conj().T @ U, np.eye(64), atol=1e-12)


def test_cross_pairs_identical(rng):
    s = random_bloch_state(rng)
    out = clone_closed_form(s, ClonerSpec.si("local"))
    assert out["14"].allclose(out["23"], atol=0)
    oracle = clone_oracle(s, ClonerSpec.si("nonlocal"))
    assert oracle["12"].allclose(oracle["34"])


@pytest.mark.parametrize("loc, lo, hi", [("local", 1 / 6, 0.5), ("nonlocal", 0.1, 0.25)])
def test_sd_outputs_valid_on_realisable_range(rng, loc, lo, hi):
    states = [random_bloch_state(rng) for _ in range(10)]
    for lam in np.arange(lo, hi + 1e-12, 0.01):
        spec = ClonerSpec.sd(loc, lam)
        for s in states:
            for p in clone_closed_form(s, spec).pairs.values():
                assert validate(from_bloch(p)).valid


def test_sd_outputs_unphysical_for_small_lambda():
    # off-axis Bloch vectors give non-positive same-side pairs once lambda is small
    s = BlochState([0.9, 0, 0], [0, 0, 0], np.zeros((3, 3)))
    p = clone_closed_form(s, ClonerSpec.sd("local", 0.02))["13"]
    assert not validate(from_bloch(p)).valid


@pytest.mark.parametrize("loc, hi", [("local", 0.5), ("nonlocal", 0.25)])
def test_sd_outputs_valid_for_family_inputs(loc, hi):
    inputs = [werner_like(0.9, 0.3), werner_like(1, 0.8), BlochState(np.zeros(3), np.zeros(3), np.diag([1.0, -1.0, 1.0]))]
    for lam in np.arange(0, hi + 1e-12, 0.01):
        for s in inputs:
            out = clone_closed_form(s, ClonerSpec.sd(loc, lam))
            assert all(validate(from_bloch(p)).valid for p in out.pairs.values())
