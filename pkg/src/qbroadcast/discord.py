"""Geometric (Hilbert-Schmidt) discord, measured on qubit A.

``geometric_discord`` uses the closed form
    D = (|x|^2 + ||T||^2 - k_max) / 4,   k_max = largest eigenvalue of x x^t + T T^t,
and ``discord_oracle`` minimises ||rho - Pi(rho)||^2 over projective
measurements Pi on qubit A without using that formula.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import minimize

from .cloning import ClonerSpec, Locality
from .errors import DomainError, SpecError
from .states import PAULI, BlochState, from_bloch, require_valid

ZERO_DISCORD_TOL = 1e-8


@dataclass(frozen=True)
class DiscordResult:
    value: float
    lambda_max: float
    omega: np.ndarray


def discord_from_bloch(x, T):
    """Vectorised closed form over (..., 3) vectors and (..., 3, 3) matrices."""
    x = np.asarray(x, dtype=float)
    T = np.asarray(T, dtype=float)
    omega = x[..., :, None] * x[..., None, :] + T @ np.swapaxes(T, -1, -2)
    k_max = np.linalg.eigvalsh(omega)[..., -1]
    total = np.einsum("...i,...i->...", x, x) + np.einsum("...ij,...ij->...", T, T)
    return (total - k_max) / 4


def geometric_discord(s: BlochState, check: bool = True) -> DiscordResult:
    """Closed-form geometric discord of ``s``.

    With ``check=False`` the state is not tested for positivity, which allows
    evaluating the formula on the unphysical outputs some cloner formulas give.
    """
    if check:
        require_valid(from_bloch(s))
    omega = np.outer(s.x, s.x) + s.T @ s.T.T
    k_max = float(np.linalg.eigvalsh(omega)[-1])
    value = (float(s.x @ s.x) + float(np.sum(s.T**2)) - k_max) / 4
    return DiscordResult(value, k_max, omega)


def _projectors(theta, phi):
    """Rank-one projectors (I +/- n.sigma)/2 for unit vectors n(theta, phi)."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    n = np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
    )
    ns = np.einsum("...k,kab->...ab", n, PAULI[1:])
    eye = np.eye(2)
    return (eye + ns) / 2, (eye - ns) / 2


def _dephasing_distance(rho, theta, phi):
    """||rho - sum_k (P_k (x) I) rho (P_k (x) I)||^2 for every direction given."""
    p_plus, p_minus = _projectors(theta, phi)
    eye = np.eye(2)
    chi = 0
    for p in (p_plus, p_minus):
        P = np.einsum("...ab,cd->...acbd", p, eye).reshape(p.shape[:-2] + (4, 4))
        chi = chi + P @ rho @ P
    diff = rho - chi
    return np.einsum("...ab,...ab->...", diff, diff.conj()).real


def discord_oracle(rho, resolution: int = 64) -> float:
    """Brute-force geometric discord by sweeping measurement directions on qubit A.

    A (theta, phi) grid with ``resolution`` points per axis is searched; the
    best cell seeds a Nelder-Mead refinement. Ties on the grid go to the first
    point in (theta, phi) lexicographic order.
    """
    if resolution < 8:
        raise DomainError(f"resolution must be at least 8, got {resolution}")
    rho = np.asarray(rho, dtype=complex)
    require_valid(rho)
    theta = np.linspace(0.0, np.pi, resolution)
    phi = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    values = _dephasing_distance(rho, tt, pp)
    i, j = np.unravel_index(np.argmin(values), values.shape)
    best = float(values[i, j])

    res = minimize(
        lambda v: float(_dephasing_distance(rho, v[0], v[1])),
        x0=[theta[i], phi[j]],
        method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": 1e-14, "maxiter": 4000},
    )
    return min(best, float(res.fun))


def _check_lambda(locality: Locality, lam: float):
    hi = 0.5 if locality is Locality.LOCAL else 0.25
    if not 0.0 <= lam <= hi:
        raise SpecError(f"lambda={lam} outside [0, {hi}] for a {locality.value} cloner")


def discord_local_output_sd(locality, lam: float, norm_sq_x: float) -> float:
    """Same-side output discord of the state-dependent cloner, in closed form.

    local:    (1 + mu^2 |x|^2 - 8 lambda + 20 lambda^2) / 2,  mu = 1 - 2 lambda
    nonlocal: (1 + mu^2 |x|^2 - 16 lambda + 68 lambda^2) / 2, mu = 1 - 4 lambda
    """
    locality = Locality(locality)
    _check_lambda(locality, lam)
    if not 0.0 <= norm_sq_x <= 1.0:
        raise DomainError(f"squared Bloch norm {norm_sq_x} outside [0, 1]")
    if locality is Locality.LOCAL:
        mu = 1 - 2 * lam
        return 0.5 * (1 + mu**2 * norm_sq_x - 8 * lam + 20 * lam**2)
    mu = 1 - 4 * lam
    return 0.5 * (1 + mu**2 * norm_sq_x - 16 * lam + 68 * lam**2)


@dataclass(frozen=True)
class TheoremMinimum:
    """Minimum of the state-dependent side-pair discord over lambda.

    ``lambda_star``/``min_value`` follow the stationary-point argument for the
    expression: for the local cloner the term 1 + mu^2 |x|^2 is held fixed
    while varying lambda, so the minimiser is 1/5 for every input. The
    ``coupled_*`` fields minimise the expression with mu tied to lambda
    throughout.
    """

    lambda_star: float
    min_value: float
    coupled_lambda: float
    coupled_min: float

    @property
    def positive(self) -> bool:
        return self.min_value > 0 and self.coupled_min > 0


def side_expression_poly(locality, norm_sq: float) -> Polynomial:
    """The same-side discord expression as a polynomial in lambda, mu tied to lambda."""
    locality = Locality(locality)
    if locality is Locality.LOCAL:
        mu = Polynomial([1, -2])
        return 0.5 * (1 + mu**2 * norm_sq + Polynomial([0, -8, 20]))
    mu = Polynomial([1, -4])
    return 0.5 * (1 + mu**2 * norm_sq + Polynomial([0, -16, 68]))


def _poly_minimum(poly: Polynomial, hi: float) -> tuple[float, float]:
    """Minimiser and minimum of a real polynomial on [0, hi], from its stationary points."""
    cands = [0.0, hi]
    for r in poly.deriv().roots():
        if abs(r.imag) < 1e-12 and 0.0 <= r.real <= hi:
            cands.append(float(r.real))
    vals = [float(poly(c)) for c in cands]
    k = int(np.argmin(vals))
    return cands[k], vals[k]


def theorem_minimum_check(locality, norm_sq: float) -> TheoremMinimum:
    locality = Locality(locality)
    if not 0.0 <= norm_sq <= 1.0:
        raise DomainError(f"squared Bloch norm {norm_sq} outside [0, 1]")
    hi = ClonerSpec.sd(locality, 0.0).lambda_max
    full = side_expression_poly(locality, norm_sq)
    coupled_lambda, coupled_min = _poly_minimum(full, hi)
    if locality is Locality.LOCAL:
        # only the lambda-dependent part, with w = 1 + mu^2 |x|^2 frozen
        lam_star, _ = _poly_minimum(Polynomial([0, -4, 10]), hi)
        min_value = discord_local_output_sd(locality, lam_star, norm_sq)
    else:
        lam_star, min_value = coupled_lambda, coupled_min
    return TheoremMinimum(lam_star, min_value, coupled_lambda, coupled_min)


def closed_form_minimum(locality, norm_sq: float) -> tuple[float, float]:
    """Closed-form minimiser and minimum of the same-side expression.

    local: (1/5, w/2 - 2/5) with w = 1 + mu^2 |x|^2 at mu = 3/5;
    nonlocal: ((2+w)/(17+4w), (1+5w)/(34+8w)) with w = |x|^2.
    """
    locality = Locality(locality)
    if locality is Locality.LOCAL:
        w = 1 + (3 / 5) ** 2 * norm_sq
        return 0.2, w / 2 - 2 / 5
    w = norm_sq
    return (2 + w) / (17 + 4 * w), (1 + 5 * w) / (34 + 8 * w)
