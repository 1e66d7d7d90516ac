import numpy as np
import pytest

from qbroadcast.cloning import ClonerSpec, clone_closed_form
from qbroadcast.discord import (
    discord_from_bloch,
    discord_local_output_sd,
    discord_oracle,
    geometric_discord,
    closed_form_minimum,
    theorem_minimum_check,
)
from qbroadcast.errors import DomainError, InvalidState, SpecError
from qbroadcast.states import (
    BlochState,
    bell_diagonal,
    from_bloch,
    maximally_mixed,
    random_bloch_state,
    random_classical_quantum,
    random_density_matrix,
    to_bloch,
    werner_like,
)


def test_bell_state_discord():
    assert geometric_discord(bell_diagonal([1, -1, 1])).value == pytest.approx(0.5)


def test_werner_discord():
    for p in (0.2, 0.7, 1.0):
        assert geometric_discord(werner_like(p, 0.5)).value == pytest.approx(p**2 / 2)


def test_maximally_mixed_has_none():
    assert geometric_discord(maximally_mixed()).value == 0


def test_side_pair_of_universal_clone():
    s = BlochState(np.zeros(3), np.zeros(3), np.diag([1.0, -1.0, 1.0]))
    side = clone_closed_form(s, ClonerSpec.si("local"))["13"]
    assert geometric_discord(side).value == pytest.approx(1 / 18)


def test_invalid_state_rejected_unless_unchecked():
    s = BlochState(np.zeros(3), np.zeros(3), np.eye(3))
    with pytest.raises(InvalidState):
        geometric_discord(s)
    assert geometric_discord(s, check=False).value == pytest.approx(0.5)


def test_oracle_matches_closed_form(rng):
    for _ in range(15):
        rho = random_density_matrix(rng)
        assert discord_oracle(rho) == pytest.approx(geometric_discord(to_bloch(rho)).value, abs=1e-6)


def test_oracle_on_pure_state(rng):
    rho = random_density_matrix(rng, 4, 1)
    assert discord_oracle(rho, resolution=16) == pytest.approx(geometric_discord(to_bloch(rho)).value, abs=1e-6)


def test_oracle_resolution():
    with pytest.raises(DomainError):
        discord_oracle(np.eye(4) / 4, resolution=4)


def test_classical_quantum_zero(rng):
    for _ in range(30):
        assert abs(geometric_discord(to_bloch(random_classical_quantum(rng))).value) <= 1e-8


def test_batched_closed_form(rng):
    states = [random_bloch_state(rng) for _ in range(6)]
    d = discord_from_bloch(np.array([s.x for s in states]), np.array([s.T for s in states]))
    np.testing.assert_allclose(d, [geometric_discord(s).value for s in states], atol=1e-15)


def test_discord_not_symmetric():
    # discord is measured on the first qubit: a quantum-classical state has some
    rng = np.random.default_rng(5)
    rho = random_classical_quantum(rng)
    swapped = to_bloch(rho).swapped()
    assert geometric_discord(to_bloch(rho)).value < 1e-12
    assert geometric_discord(swapped).value > 1e-4


def test_theorem_expression_values():
    assert discord_local_output_sd("local", 0.2, 0.0) == pytest.approx(0.1)
    assert discord_local_output_sd("nonlocal", 0.0, 1.0) == pytest.approx(1.0)
    with pytest.raises(SpecError):
        discord_local_output_sd("local", 0.6, 0.5)
    with pytest.raises(SpecError):
        discord_local_output_sd("nonlocal", 0.3, 0.5)
    with pytest.raises(DomainError):
        discord_local_output_sd("local", 0.1, 1.5)


@pytest.mark.parametrize("norm_sq", [0.0, 0.25, 0.5, 1.0])
def test_minima_match_closed_forms(norm_sq):
    for loc in ("local", "nonlocal"):
        m = theorem_minimum_check(loc, norm_sq)
        lam, val = closed_form_minimum(loc, norm_sq)
        assert m.lambda_star == pytest.approx(lam, abs=1e-10)
        assert m.min_value == pytest.approx(val, abs=1e-10)
        assert m.positive


def test_closed_form_minimum_examples():
    assert closed_form_minimum("local", 1.0)[1] == pytest.approx(0.28)
    lam, val = closed_form_minimum("nonlocal", 0.0)
    assert lam == pytest.approx(2 / 17) and val == pytest.approx(1 / 34)


def test_coupled_local_minimum_is_lower():
    # with mu tied to lambda the local minimum at |x|^2 = 1 sits at lambda = 1/4
    m = theorem_minimum_check("local", 1.0)
    assert m.coupled_lambda == pytest.approx(0.25, abs=1e-8)
    assert m.coupled_min == pytest.approx(0.25, abs=1e-10)
    assert m.coupled_min <= m.min_value


def test_sd_side_discord_positive(rng):
    states = [random_bloch_state(rng) for _ in range(20)]
    for loc, hi in (("local", 0.5), ("nonlocal", 0.25)):
        for lam in np.linspace(0.01, hi, 15):
            spec = ClonerSpec.sd(loc, lam)
            for s in states:
                for p in clone_closed_form(s, spec).side:
                    assert geometric_discord(p, check=False).value > 1e-8


def test_classical_mixture_has_none():
    s = BlochState(np.zeros(3), np.zeros(3), np.diag([0.0, 0.0, 1.0]))
    assert geometric_discord(s).value == pytest.approx(0, abs=1e-15)


def test_oracle_phi_plus():
    assert discord_oracle(from_bloch(bell_diagonal([1, -1, 1]))) == pytest.approx(0.5, abs=1e-4)


def test_expression_at_lambda_zero():
    assert discord_local_output_sd("local", 0.0, 0.0) == pytest.approx(0.5)


def test_expression_versus_direct_discord():
    # the closed-form expression and the discord of the actual pair are separate quantities
    s = werner_like(0.9, 0.3)
    pair = clone_closed_form(s, ClonerSpec.sd("local", 0.2))["13"]
    direct = geometric_discord(pair).value
    expr = discord_local_output_sd("local", 0.2, float(s.x @ s.x))
    assert direct > 0 and expr > 0
    assert abs(expr - direct) > 1e-3
