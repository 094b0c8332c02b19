"""One-dimensional two-component Dirac scattering for piecewise-constant potentials.

The 2x2 reduction uses alpha = sigma_x and beta = sigma_z, so a region at
constant potential V has local eigenproblem (sigma_x q + sigma_z m) w = eps w
with the effective kinetic energy

    eps = E - V                 (D1)
    eps = E - sgn(E) V          (D2, equivalently sgn(E)(|E| - V))

A region propagates when |eps| > m (wavenumber k = sqrt(eps^2 - m^2)), decays
when |eps| < m (kappa = sqrt(m^2 - eps^2)), and under D2 supports no mode at
all when sgn(eps) != sgn(E), i.e. |E| <= V: increasing a barrier only widens
the interval where nothing propagates.

Transmitted/incident modes are always selected by the sign of their carried
current, which for these spinors equals the sign of the group velocity; with
the opposite choice T falls outside [0, 1] in the regime where the D1 barrier
turns transparent.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import Alternative, Constants, DEFAULT_CONSTANTS, ROOT_TOLERANCE, bisect_root

__all__ = [
    "CLASSICAL",
    "EVANESCENT",
    "EVANESCENT_TUNNELING",
    "FORBIDDEN",
    "GAP_BLOCKED",
    "KLEIN_ZONE",
    "PROPAGATING",
    "PotentialProfile",
    "RegionMode",
    "ScatterResult",
    "barrier_transmission",
    "dispersion",
    "square_well_bound_states",
    "step_transmission",
]

PROPAGATING = "propagating"
EVANESCENT = "evanescent"
FORBIDDEN = "forbidden"

CLASSICAL = "classical"
KLEIN_ZONE = "klein_zone"
GAP_BLOCKED = "gap_blocked"
EVANESCENT_TUNNELING = "evanescent_tunneling"

# Sweeps stay clear of the measure-zero mode boundaries E = V +- m where k or
# kappa vanishes; behaviour there is defined by one-sided limits.
_EDGE_MARGIN = 1e-9


@dataclass(frozen=True)
class PotentialProfile:
    """Ordered piecewise-constant regions; the first extends to -inf, the last to +inf.

    ``edges[i]`` is the boundary between region i and region i+1, strictly
    increasing; ``values[i]`` is the constant potential of region i in keV.
    """

    edges: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.edges) + 1:
            raise ValueError("need exactly one more region value than edges")
        if any(not b > a for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError("region edges must be strictly increasing")

    @classmethod
    def from_regions(cls, regions) -> "PotentialProfile":
        """Build from [(left_edge, V0), ...] with the first left_edge = -inf."""
        if not regions:
            raise ValueError("empty region list")
        if not math.isinf(regions[0][0]):
            raise ValueError("first region must start at -inf")
        edges = tuple(float(left) for left, _ in regions[1:])
        values = tuple(float(v) for _, v in regions)
        return cls(edges=edges, values=values)

    @classmethod
    def step(cls, v0: float, position: float = 0.0) -> "PotentialProfile":
        return cls(edges=(position,), values=(0.0, float(v0)))

    @classmethod
    def barrier(cls, v0: float, width: float, left: float = 0.0) -> "PotentialProfile":
        if width <= 0.0:
            raise ValueError("barrier width must be positive")
        return cls(edges=(left, left + width), values=(0.0, float(v0), 0.0))


@dataclass(frozen=True)
class RegionMode:
    """Local mode content of a region at energy E.

    For a propagating regime ``k`` is the wavenumber of the positive-current
    mode and ``spinor_ratio`` its second/first component ratio; for an
    evanescent regime ``k`` holds the decay constant kappa and the ratio is
    that of the rightward-decaying mode.  Forbidden regions carry k = 0.
    """

    regime: str
    k: float
    spinor_ratio: complex


@dataclass(frozen=True)
class ScatterResult:
    T: float
    R: float
    classification: str


def _effective_kinetic(alt: Alternative, v0: float, e: float) -> float | None:
    """eps for the local eigenproblem, or None when D2 forbids any mode."""
    if alt is Alternative.D1:
        return e - v0
    if e == 0.0:
        return None
    sign = 1.0 if e > 0.0 else -1.0
    xi = abs(e) - v0
    if xi <= 0.0:
        return None
    return sign * xi


def dispersion(alt: Alternative, v0: float, e: float, constants: Constants = DEFAULT_CONSTANTS) -> RegionMode:
    """Classify the mode content of a constant-potential region at energy E."""
    m = constants.m
    eps = _effective_kinetic(alt, v0, e)
    if eps is None:
        return RegionMode(regime=FORBIDDEN, k=0.0, spinor_ratio=0.0j)
    if abs(eps) > m:
        k = math.sqrt(eps * eps - m * m)
        # Positive-current mode: q = +k on the upper branch, q = -k on the lower.
        q = k if eps > 0.0 else -k
        ratio = (eps - m) / q
        return RegionMode(regime=PROPAGATING, k=k, spinor_ratio=complex(ratio))
    kappa = math.sqrt(m * m - eps * eps)
    if kappa == 0.0:
        # exact gap edges, defined by one-sided limits: the decaying spinor
        # tends to (1, 0) at eps = +m and to (0, 1) at eps = -m
        ratio = 0.0j if eps > 0.0 else complex(0.0, math.inf)
        return RegionMode(regime=EVANESCENT, k=0.0, spinor_ratio=ratio)
    ratio = 1.0j * (eps - m) / (-kappa)  # rightward-decaying mode e^{-kappa z}
    return RegionMode(regime=EVANESCENT, k=kappa, spinor_ratio=ratio)


def _modes(alt: Alternative, v0: float, e: float, m: float):
    """Both local modes of a region as (q, ratio) pairs, or None if forbidden.

    Ordering: propagating -> (positive-current, negative-current);
    evanescent -> (decaying rightward, growing rightward).
    """
    eps = _effective_kinetic(alt, v0, e)
    if eps is None:
        return None
    if abs(eps) > m:
        k = math.sqrt(eps * eps - m * m)
        q_fwd = k if eps > 0.0 else -k
        return ((1j * q_fwd, complex((eps - m) / q_fwd)), (-1j * q_fwd, complex(-(eps - m) / q_fwd)))
    kappa = math.sqrt(m * m - eps * eps)
    return ((-kappa + 0j, 1j * (eps - m) / (-kappa)), (kappa + 0j, 1j * (eps - m) / kappa))


def step_transmission(alt: Alternative, v0: float, e: float, constants: Constants = DEFAULT_CONSTANTS) -> ScatterResult:
    """Transmission/reflection for the semi-infinite step V(z>0) = V0, analytic matching.

    D2 for E > V0 + m follows the closed form T = 4r/(1+r)^2 with
    r = sqrt((E-(V0+m))/(E-(V0-m))) * sqrt((E+m)/(E-m)); everywhere below
    that edge no current can enter the step and T = 0.  D1 matches both
    spinor components at the interface, including the regime m < E < V0 - m
    where the step supports lower-branch propagating modes.
    """
    m = constants.m
    if e <= m:
        raise ValueError("no incident propagating mode: need E > m on the V = 0 side")
    lam_in = math.sqrt(e * e - m * m) / (e + m)

    if alt is Alternative.D2:
        if e > v0 + m:
            r = math.sqrt((e - (v0 + m)) / (e - (v0 - m))) * math.sqrt((e + m) / (e - m))
            t = 4.0 * r / (1.0 + r) ** 2
            return ScatterResult(T=t, R=1.0 - t, classification=CLASSICAL)
        return ScatterResult(T=0.0, R=1.0, classification=GAP_BLOCKED)

    mode = dispersion(alt, v0, e, constants)
    if mode.regime == PROPAGATING:
        lam_out = mode.spinor_ratio.real
        t = 4.0 * lam_in * lam_out / (lam_in + lam_out) ** 2
        cls = CLASSICAL if e > v0 + m else KLEIN_ZONE
        return ScatterResult(T=t, R=1.0 - t, classification=cls)
    return ScatterResult(T=0.0, R=1.0, classification=GAP_BLOCKED)


def barrier_transmission(
    alt: Alternative,
    profile: PotentialProfile,
    e: float,
    constants: Constants = DEFAULT_CONSTANTS,
) -> ScatterResult:
    """T and R across an arbitrary piecewise-constant profile.

    Both spinor components are matched at every edge and the resulting linear
    system solved for the reflection and transmission amplitudes.  Interior
    D2-forbidden regions act as hard walls (T = 0, R = 1); interior evanescent
    regions attenuate exponentially.  Requires propagating asymptotic modes on
    the incident side; an evanescent far side gives T = 0 exactly.
    """
    m = constants.m
    values = profile.values
    edges = profile.edges
    n = len(values)

    left = dispersion(alt, values[0], e, constants)
    if left.regime != PROPAGATING:
        raise ValueError("no incident propagating mode in the leftmost region")
    region_modes = [_modes(alt, v, e, m) for v in values]
    if any(mm is None for mm in region_modes):
        return ScatterResult(T=0.0, R=1.0, classification=GAP_BLOCKED)
    right = dispersion(alt, values[-1], e, constants)
    if right.regime != PROPAGATING:
        # Far side decays: nothing is transmitted, and unit reflection follows
        # from current conservation with a purely imaginary far-side ratio.
        classification = GAP_BLOCKED
    else:
        classification = _classify(alt, values, e, constants)

    # Unknowns: rho, (a_j, b_j) per interior region, tau.
    n_unknown = 2 * (n - 1)
    a_mat = np.zeros((n_unknown, n_unknown), dtype=complex)
    rhs = np.zeros(n_unknown, dtype=complex)

    def basis(j: int, which: int, z: float) -> np.ndarray:
        """Spinor of mode ``which`` of region j evaluated at z (edge-referenced)."""
        q, ratio = region_modes[j][which]
        if j == 0:
            z0 = edges[0]
        else:
            z0 = edges[j - 1]
        ph = cmath.exp(q * (z - z0))
        return np.array([ph, ratio * ph], dtype=complex)

    # Column layout: [rho | a_1 b_1 ... a_{n-2} b_{n-2} | tau]
    def col_of(j: int, which: int) -> int:
        if j == 0:
            return 0  # rho multiplies the reflected (negative-current) mode
        if j == n - 1:
            return n_unknown - 1  # tau multiplies the outgoing/decaying mode
        return 1 + 2 * (j - 1) + which

    for eidx, x in enumerate(edges):
        jl, jr = eidx, eidx + 1
        for comp in range(2):
            row = 2 * eidx + comp
            # Left-region contribution.
            if jl == 0:
                rhs[row] = -basis(0, 0, x)[comp]  # incident amplitude fixed to 1
                a_mat[row, col_of(0, 1)] += basis(0, 1, x)[comp]
            else:
                for which in (0, 1):
                    a_mat[row, col_of(jl, which)] += basis(jl, which, x)[comp]
            # Right-region contribution, moved to the left-hand side.
            if jr == n - 1:
                a_mat[row, col_of(jr, 0)] -= basis(jr, 0, x)[comp]
            else:
                for which in (0, 1):
                    a_mat[row, col_of(jr, which)] -= basis(jr, which, x)[comp]
        # Right asymptote keeps only its outgoing/decaying mode: nothing to add,
        # the growing/incoming column simply does not exist.

    sol = np.linalg.solve(a_mat, rhs)
    rho = sol[0]
    tau = sol[-1]
    lam_in = left.spinor_ratio.real
    lam_out = region_modes[-1][0][1].real  # zero for an evanescent far side
    t = float(abs(tau) ** 2 * lam_out / lam_in)
    if abs(t) < 1e-15:
        t = 0.0  # keep the 0 <= T invariant against signed-zero roundoff
    r = float(abs(rho) ** 2)
    return ScatterResult(T=t, R=r, classification=classification)


def _classify(alt, values, e, constants) -> str:
    interior = [dispersion(alt, v, e, constants) for v in values[1:-1]]
    if any(mode.regime == EVANESCENT for mode in interior):
        return EVANESCENT_TUNNELING
    klein = False
    for v in values:
        eps = _effective_kinetic(alt, v, e)
        if eps is not None and eps < 0.0 and abs(eps) > constants.m:
            klein = True
    return KLEIN_ZONE if klein else CLASSICAL


# --- bound states -------------------------------------------------------------
#
# In the real form phi1' = -(E - V + m) phi2, phi2' = (E - V - m) phi1
# (obtained from psi = (phi1, i phi2)) every piecewise-constant solution is
# real, so the 4x4 matching determinant for a square well is a real-valued,
# sign-changing function of E suitable for a scan + bisection.


def _phi_basis(e: float, v: float, m: float):
    """Two real solution branches (phi1, phi2, and their z-evolution) in one region."""
    a = e - v + m
    b = e - v - m
    prod = a * b  # = eps^2 - m^2
    if prod > 0.0:
        k = math.sqrt(prod)

        def sol(z, c1, c2):
            # phi1 = c1 cos(kz) + c2 sin(kz); phi2 = -phi1'/a
            phi1 = c1 * math.cos(k * z) + c2 * math.sin(k * z)
            dphi1 = k * (-c1 * math.sin(k * z) + c2 * math.cos(k * z))
            return phi1, -dphi1 / a

    else:
        kappa = math.sqrt(-prod)

        def sol(z, c1, c2):
            phi1 = c1 * math.cosh(kappa * z) + c2 * math.sinh(kappa * z)
            dphi1 = kappa * (c1 * math.sinh(kappa * z) + c2 * math.cosh(kappa * z))
            return phi1, -dphi1 / a

    return sol


def _well_determinant(e: float, depth: float, width: float, m: float) -> float:
    """Matching determinant for the well V = -depth on (0, width); zero at bound states."""
    kappa = math.sqrt(m * m - e * e)
    # Exterior decaying solutions: left ~ e^{+kappa z}, right ~ e^{-kappa z}.
    mu_left = -kappa / (e + m)
    mu_right = kappa / (e + m)
    interior = _phi_basis(e, -depth, m)
    i10, i20 = interior(0.0, 1.0, 0.0)
    j10, j20 = interior(0.0, 0.0, 1.0)
    i1w, i2w = interior(width, 1.0, 0.0)
    j1w, j2w = interior(width, 0.0, 1.0)
    mat = np.array(
        [
            [1.0, -i10, -j10, 0.0],
            [mu_left, -i20, -j20, 0.0],
            [0.0, i1w, j1w, -1.0],
            [0.0, i2w, j2w, -mu_right],
        ]
    )
    return float(np.linalg.det(mat))


def square_well_bound_states(
    alt: Alternative,
    depth: float,
    width: float,
    constants: Constants = DEFAULT_CONSTANTS,
    n_scan: int = 2000,
) -> list[float]:
    """Discrete levels of the attractive square well V = -depth on (0, width).

    D1 admits levels anywhere in the gap (-m, m); deep wells pull the lowest
    one below zero and toward -m.  Under D2 a positive-energy state sees the
    same equation, but only roots with 0 < E < m exist on the positive branch
    (the mirror negatives follow by the spectrum symmetry), so the search
    window shrinks accordingly.  Roots come from a uniform scan of the
    matching determinant plus bisection.
    """
    if depth < 0.0 or width <= 0.0:
        raise ValueError("need depth >= 0 and width > 0")
    m = constants.m
    if depth == 0.0:
        return []
    lo = -m * (1.0 - 1e-6) if alt is Alternative.D1 else m * 1e-6
    hi = m * (1.0 - 1e-6)

    # Split the scan at interior regime boundaries E = -depth +- m where the
    # interior basis switches between trig and hyperbolic behaviour.
    breaks = sorted({lo, hi, *(b for b in (-depth - m, -depth + m) if lo < b < hi)})
    roots: list[float] = []
    xtol = ROOT_TOLERANCE * m
    for seg_lo, seg_hi in zip(breaks, breaks[1:]):
        a = seg_lo + _EDGE_MARGIN * m
        b = seg_hi - _EDGE_MARGIN * m
        if not b > a:
            continue
        grid = np.linspace(a, b, n_scan)
        vals = np.array([_well_determinant(x, depth, width, m) for x in grid])
        sign_change = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        for idx in sign_change:
            root = bisect_root(
                lambda x: _well_determinant(x, depth, width, m),
                float(grid[idx]),
                float(grid[idx + 1]),
                xtol,
                fa=float(vals[idx]),
                fb=float(vals[idx + 1]),
            )
            roots.append(root)
    return sorted(roots)
