"""Kinematics of free electron-positron pairs emitted by a moving excited ion.

An ion carrying a bound-pair excitation of energy delta_eps moves with the
beam velocity (gamma_I = 1 + 0.001 x for a beam energy of x MeV/nucleon).  In
the ion frame the pair leaves with opening half-angle theta_e and Lorentz
factor gamma_e solving

    delta_eps/(2m) + 1 - gamma_e = +- R sqrt(gamma_e^2 - 1),
    R = (beta_I/gamma_I) cos(theta_e),

with the minus sign defining the "+" branch (both quadratic roots are kept as
first-class solutions).  The laboratory pair kinetic energy follows as

    T_lab = (gamma_I - 1) 2m
            + gamma_I (delta_eps - 2m (1+gamma_I)/gamma_I sqrt(gamma_e^2-1) beta_I cos(theta_e)),

applied to either branch's gamma_e; the experiment tables are reproduced by
exactly this form.  Inversion for theta_e at a target T_lab uses a 0.1-degree
scan plus bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Constants, DEFAULT_CONSTANTS, bisect_root

__all__ = [
    "IonBoost",
    "PairSolution",
    "boost_from_beam_energy",
    "defining_residual",
    "gamma_e_solutions",
    "lab_pair_energy",
    "solve_theta",
]

_BRANCHES = ("+", "-")


@dataclass(frozen=True)
class IonBoost:
    """Ion boost after scattering, assumed equal to the beam velocity."""

    x_mev_per_nucleon: float
    gamma_i: float
    beta_i: float


@dataclass(frozen=True)
class PairSolution:
    """One branch solution at a given opening half-angle.

    ``e_cm``/``p_cm`` are the pair energy and longitudinal momentum in the ion
    frame; ``delta_ke`` (ion kinetic-energy change entering the line position)
    and ``k_cm`` (pair center-of-mass kinetic energy) are retained as explicit
    fields but fixed to zero under the near-threshold assumptions.
    """

    branch: str
    theta_e: float  # radians
    r_parameter: float
    gamma_e: float
    t_lab: float  # keV
    e_cm: float  # keV
    p_cm: float  # keV
    delta_ke: float = 0.0
    k_cm: float = 0.0


def boost_from_beam_energy(x: float) -> IonBoost:
    """Boost for a beam energy of x MeV per nucleon: gamma_I = 1 + 0.001 x."""
    if x <= 0.0:
        raise ValueError("beam energy must be positive")
    gamma_i = 1.0 + 0.001 * x
    beta_i = math.sqrt(1.0 - 1.0 / (gamma_i * gamma_i))
    return IonBoost(x_mev_per_nucleon=x, gamma_i=gamma_i, beta_i=beta_i)


def _check_branch(branch: str) -> float:
    if branch not in _BRANCHES:
        raise ValueError(f"branch must be '+' or '-', got {branch!r}")
    return +1.0 if branch == "+" else -1.0


def gamma_e_solutions(delta_eps: float, r: float, constants: Constants = DEFAULT_CONSTANTS) -> tuple[float, float]:
    """Both closed-form roots (gamma_plus, gamma_minus) of the emission equation."""
    if not 0.0 <= r < 1.0:
        raise ValueError("R must lie in [0, 1)")
    if delta_eps < 0.0:
        raise ValueError("delta_eps must be non-negative")
    d = delta_eps / (2.0 * constants.m)
    one_minus_r2 = 1.0 - r * r
    root = math.sqrt(d * (2.0 + d) + r * r)
    base = (1.0 + d) / one_minus_r2
    shift = r * root / one_minus_r2
    return base + shift, base - shift


def defining_residual(gamma_e: float, delta_eps: float, r: float, branch: str, constants: Constants = DEFAULT_CONSTANTS) -> float:
    """Residual of the branch-signed emission equation at gamma_e.

    The "-" branch satisfies d + 1 - gamma = +R sqrt(gamma^2 - 1); the "+"
    branch carries the opposite sign of the square-root term.
    """
    sign = _check_branch(branch)
    d = delta_eps / (2.0 * constants.m)
    return d + 1.0 - gamma_e + sign * r * math.sqrt(max(gamma_e * gamma_e - 1.0, 0.0))


def lab_pair_energy(
    boost: IonBoost,
    delta_eps: float,
    theta_e: float,
    branch: str,
    constants: Constants = DEFAULT_CONSTANTS,
) -> PairSolution:
    """Laboratory total pair kinetic energy for one branch at theta_e (radians).

    theta_e must lie in (0, pi/2]; at pi/2 the pair leaves back-to-back, the
    ion takes no recoil, and T_lab reduces to (gamma_I - 1) 2m + gamma_I delta_eps.
    """
    if not 0.0 < theta_e <= 0.5 * math.pi + 1e-15:
        raise ValueError("theta_e must lie in (0, pi/2]")
    sign = _check_branch(branch)
    m = constants.m
    r = (boost.beta_i / boost.gamma_i) * math.cos(theta_e)
    g_plus, g_minus = gamma_e_solutions(delta_eps, r, constants)
    gamma_e = g_plus if sign > 0 else g_minus
    gb = math.sqrt(max(gamma_e * gamma_e - 1.0, 0.0))  # gamma_e * beta_e
    t_lab = (boost.gamma_i - 1.0) * 2.0 * m + boost.gamma_i * (
        delta_eps
        - 2.0 * m * ((1.0 + boost.gamma_i) / boost.gamma_i) * gb * boost.beta_i * math.cos(theta_e)
    )
    e_cm = 2.0 * m * gamma_e
    p_cm = -2.0 * m * gb * math.cos(theta_e)
    return PairSolution(
        branch=branch,
        theta_e=theta_e,
        r_parameter=r,
        gamma_e=gamma_e,
        t_lab=t_lab,
        e_cm=e_cm,
        p_cm=p_cm,
    )


def solve_theta(
    boost: IonBoost,
    delta_eps: float,
    branch: str,
    t_target: float,
    constants: Constants = DEFAULT_CONSTANTS,
    scan_step_deg: float = 0.1,
    tol_deg: float = 1e-4,
) -> list[float]:
    """All opening half-angles in (0, 90) degrees with T_lab = t_target.

    Returns angles in radians, ascending; empty when the target is out of
    reach.  theta = 0 is excluded (collinear emission carries no opening) and
    90 degrees enters as the recoil-free endpoint.
    """
    if t_target <= 0.0:
        raise ValueError("target energy must be positive")
    _check_branch(branch)

    def f(theta_deg: float) -> float:
        return lab_pair_energy(boost, delta_eps, math.radians(theta_deg), branch, constants).t_lab - t_target

    thetas = []
    n_steps = int(round((90.0 - scan_step_deg) / scan_step_deg)) + 1
    grid = [scan_step_deg + i * scan_step_deg for i in range(n_steps)]
    if grid[-1] > 90.0:
        grid[-1] = 90.0
    vals = [f(th) for th in grid]
    for (a, fa), (b, fb) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if fa == 0.0:
            thetas.append(a)
            continue
        if (fa > 0.0) == (fb > 0.0):
            continue
        thetas.append(bisect_root(f, a, b, tol_deg, fa=fa, fb=fb))
    if vals and vals[-1] == 0.0:
        thetas.append(grid[-1])
    return [math.radians(t) for t in sorted(set(thetas))]
