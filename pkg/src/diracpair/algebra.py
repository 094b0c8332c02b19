"""Finite-matrix verification of the Dirac operator content.

Everything here is exact 4x4 (or 2x2 for the one-dimensional reduction)
complex linear algebra: Clifford relations, the charge-conjugation matrix,
energy projectors, the sign-of-energy operator, the charge-current identity,
and the C/P/tau transformation laws for both potential couplings.  Residuals
are reported relative to the scale of the compared operators so keV-sized
entries do not inflate them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Constants, DEFAULT_CONSTANTS

__all__ = [
    "ConjugationMatrix",
    "DiracMatrices",
    "FieldConfig",
    "appendix_identities",
    "build_matrices",
    "casimir_projectors",
    "charge_current_identity",
    "clifford_residuals",
    "dirac_matrices_1d",
    "find_conjugation_matrix",
    "free_hamiltonian",
    "interaction_hamiltonian",
    "sign_energy",
    "spin_matrices",
    "spinor_u",
    "spinor_v",
    "transformation_checks",
]

_PAULI = (
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)
_I2 = np.eye(2, dtype=complex)
_I4 = np.eye(4, dtype=complex)


def _block(a, b, c, d):
    return np.block([[a, b], [c, d]])


@dataclass(frozen=True)
class DiracMatrices:
    """The three alpha matrices and beta in a concrete representation."""

    alpha: tuple[np.ndarray, np.ndarray, np.ndarray]
    beta: np.ndarray
    representation_tag: str = "dirac"


@dataclass(frozen=True)
class ConjugationMatrix:
    """Unitary C with C alpha* C^-1 = alpha and C beta* C^-1 = -beta."""

    C: np.ndarray
    phase_convention: complex = 1.0 + 0.0j


@dataclass(frozen=True)
class FieldConfig:
    """Constant external fields: vector potential A (keV) and scalar Phi (keV).

    The electron charge is carried as a signed coupling, e < 0.
    """

    A: tuple[float, float, float] = (0.0, 0.0, 0.0)
    Phi: float = 0.0
    e_charge: float = -1.0

    def __post_init__(self) -> None:
        if self.e_charge >= 0.0:
            raise ValueError("e_charge must be negative (electron convention)")


def build_matrices(representation: str = "dirac") -> DiracMatrices:
    """Construct the standard (Dirac) representation.

    alpha_i has the Pauli matrices on the off-diagonal blocks, beta is
    diag(1, 1, -1, -1).  Only the standard representation is supported.
    """
    if representation != "dirac":
        raise ValueError(f"unknown representation {representation!r}")
    z = np.zeros((2, 2), dtype=complex)
    alpha = tuple(_block(z, s, s, z) for s in _PAULI)
    beta = _block(_I2, z, z, -_I2)
    return DiracMatrices(alpha=alpha, beta=beta, representation_tag="dirac")


def spin_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Block-diagonal 4x4 spin matrices Sigma_i = diag(sigma_i, sigma_i)."""
    z = np.zeros((2, 2), dtype=complex)
    return tuple(_block(s, z, z, s) for s in _PAULI)


def clifford_residuals(alphas, beta) -> dict[str, float]:
    """Max relative residuals of the Clifford relations for any alpha/beta set.

    Works for the 4x4 representation and the 2x2 one-dimensional reduction
    alike (pass a 1-tuple of alphas for the latter).
    """
    n = beta.shape[0]
    eye = np.eye(n, dtype=complex)
    res: dict[str, float] = {}
    worst_aa = 0.0
    for i, ai in enumerate(alphas):
        for j, aj in enumerate(alphas):
            target = 2.0 * eye if i == j else np.zeros_like(eye)
            worst_aa = max(worst_aa, _rel_residual(ai @ aj + aj @ ai, target))
    res["alpha_anticommutators"] = worst_aa
    res["alpha_beta_anticommutators"] = max(
        _rel_residual(ai @ beta + beta @ ai, np.zeros_like(eye)) for ai in alphas
    )
    res["beta_squared"] = _rel_residual(beta @ beta, eye)
    res["hermiticity"] = max(
        [_rel_residual(m, m.conj().T) for m in (*alphas, beta)]
    )
    return res


def _rel_residual(a: np.ndarray, b: np.ndarray) -> float:
    """max |a - b| / (1 + max |b|): absolute for O(1) targets, relative for large."""
    scale = 1.0 + float(np.max(np.abs(b))) if b.size else 1.0
    return float(np.max(np.abs(a - b))) / scale


def free_hamiltonian(m: DiracMatrices, p, constants: Constants = DEFAULT_CONSTANTS) -> np.ndarray:
    """H0(p) = alpha . p + beta m for a momentum 3-vector p (keV)."""
    p = np.asarray(p, dtype=float)
    h = constants.m * m.beta.copy()
    for ai, pi in zip(m.alpha, p):
        h = h + pi * ai
    return h


def interaction_hamiltonian(m: DiracMatrices, fields: FieldConfig) -> np.ndarray:
    """H1 = -e alpha . A + e Phi for constant external fields."""
    h = fields.e_charge * fields.Phi * _I4
    for ai, Ai in zip(m.alpha, fields.A):
        h = h - fields.e_charge * Ai * ai
    return h


def spinor_u(p, s: int, constants: Constants = DEFAULT_CONSTANTS) -> np.ndarray:
    """Positive-energy eigenspinor of H0(p), unit normalized, spin index s in {1, 2}."""
    return _spinor(p, s, +1, constants)


def spinor_v(p, s: int, constants: Constants = DEFAULT_CONSTANTS) -> np.ndarray:
    """Negative-energy eigenspinor of H0(p), unit normalized, spin index s in {1, 2}."""
    return _spinor(p, s, -1, constants)


def _spinor(p, s, sign, constants):
    if s not in (1, 2):
        raise ValueError("spin index must be 1 or 2")
    p = np.asarray(p, dtype=float)
    m = constants.m
    e = float(np.sqrt(p @ p + m * m))
    chi = np.zeros(2, dtype=complex)
    chi[s - 1] = 1.0
    sp = sum(si * pi for si, pi in zip(_PAULI, p))
    small = (sp @ chi) / (e + m)
    if sign > 0:
        out = np.concatenate([chi, small])
    else:
        out = np.concatenate([-small, chi])
    return out / np.linalg.norm(out)


def find_conjugation_matrix(m: DiracMatrices, constants: Constants = DEFAULT_CONSTANTS) -> ConjugationMatrix:
    """Solve C alpha_i* C^-1 = alpha_i, C beta* C^-1 = -beta as a joint linear system.

    The four similarity constraints are assembled as a 64x16 linear map acting
    on vec(C); the solution space must be one-dimensional (anything else
    signals a representation these constraints do not pin down).  The solution
    is normalized to be unitary with its largest-magnitude entry real positive,
    which makes downstream output deterministic.
    """
    eye = _I4
    rows = []
    for ai in m.alpha:
        # C @ conj(ai) - ai @ C = 0  ->  (conj(ai).T (x) I - I (x) ai) vec(C) = 0
        rows.append(np.kron(ai.conj().T, eye) - np.kron(eye, ai))
    rows.append(np.kron(m.beta.conj().T, eye) + np.kron(eye, m.beta))
    system = np.vstack(rows)
    _, svals, vh = np.linalg.svd(system)
    tol = constants.numeric_tolerance * max(1.0, float(svals[0]))
    null_dim = int(np.sum(svals < tol)) + (16 - len(svals) if len(svals) < 16 else 0)
    if null_dim != 1:
        raise ValueError(f"conjugation constraints have solution space of dimension {null_dim}, expected 1")
    c = vh[-1].reshape(4, 4)
    # Rescale to unitary: the constraints force C C^dagger to be a multiple of I.
    gram = c @ c.conj().T
    c = c / np.sqrt(np.abs(gram[0, 0]))
    # Canonical phase: largest-magnitude entry real positive.
    idx = np.unravel_index(np.argmax(np.abs(c)), c.shape)
    phase = c[idx] / abs(c[idx])
    c = c / phase
    return ConjugationMatrix(C=c, phase_convention=1.0 / phase)


def casimir_projectors(p, constants: Constants = DEFAULT_CONSTANTS) -> tuple[np.ndarray, np.ndarray]:
    """Energy projectors B+(p), B-(p) onto the +E_p and -E_p eigenspaces of H0."""
    mats = build_matrices()
    p = np.asarray(p, dtype=float)
    m = constants.m
    e = float(np.sqrt(p @ p + m * m))
    h = free_hamiltonian(mats, p, constants)
    b_plus = 0.5 * (_I4 + h / e)
    b_minus = 0.5 * (_I4 - h / e)
    return b_plus, b_minus


def sign_energy(p, constants: Constants = DEFAULT_CONSTANTS) -> np.ndarray:
    """sgn(E)(p) = B+(p) - B-(p) = (alpha . p + beta m) / E_p."""
    b_plus, b_minus = casimir_projectors(p, constants)
    return b_plus - b_minus


def charge_current_identity(p, axis: int, constants: Constants = DEFAULT_CONSTANTS) -> float:
    """Residual of (1/2){sgn(E), alpha_i} = (p_i / E_p) I4.

    The symmetrized product of the sign operator with alpha_i collapses, via
    the Clifford relations alone, to a multiple of the identity carrying the
    classical velocity p_i / E_p.  Returns the relative residual.
    """
    if axis not in (0, 1, 2):
        raise ValueError("axis must be 0, 1, or 2")
    mats = build_matrices()
    p = np.asarray(p, dtype=float)
    m = constants.m
    e = float(np.sqrt(p @ p + m * m))
    s = sign_energy(p, constants)
    ai = mats.alpha[axis]
    lhs = 0.5 * (s @ ai + ai @ s)
    rhs = (p[axis] / e) * _I4
    return _rel_residual(lhs, rhs)


# --- C / P / tau transformation machinery ------------------------------------
#
# Each transformation is a triple (matrix, conjugation flag, vector-flip flag).
# Applying it to an operator-valued function O(p, A) computes
# M @ (O* if conjugating else O) @ M^-1 and compares against the stated law
# evaluated at flipped arguments: the flip sends every polar vector (p and A)
# to its negative.  The tau matrix is fixed only up to a phase by the laws it
# must satisfy (they coincide with the charge-conjugation constraints), so it
# is represented as i*C by convention.


@dataclass(frozen=True)
class _Transform:
    name: str
    matrix: np.ndarray
    conjugate: bool


def _apply(t: _Transform, op: np.ndarray) -> np.ndarray:
    inner = op.conj() if t.conjugate else op
    return t.matrix @ inner @ np.linalg.inv(t.matrix)


def transformation_checks(
    p,
    fields: FieldConfig | None = None,
    constants: Constants = DEFAULT_CONSTANTS,
) -> dict[str, float]:
    """Verify the C/P/tau laws for H0, sgn(E), H1, and both coupled Hamiltonians.

    Returns a dict of relative residuals.  All laws are phase-insensitive
    similarity statements:

    - C H0(p) C^-1 = -H0(-p), P H0(p) P^-1 = H0(-p), tau H0(p) tau^-1 = -H0(-p)
      (the same three signs hold for sgn(E));
    - H1 is invariant under all three, with the parity comparison taken at the
      parity-flipped vector potential (A is a polar vector);
    - D2 composite: C (H0(p) + sgnE(p) H1) C^-1 = -(H0(-p) + sgnE(-p) H1);
    - D1 breakdown: C (H0(p) + H1) C^-1 = -(H0(-p) - H1), an exact sign flip
      of the interaction block.
    """
    if fields is None:
        fields = FieldConfig()
    mats = build_matrices()
    conj = find_conjugation_matrix(mats, constants)
    c = _Transform("C", conj.C, conjugate=True)
    par = _Transform("P", mats.beta.copy(), conjugate=False)
    tau = _Transform("tau", 1.0j * conj.C, conjugate=True)

    p = np.asarray(p, dtype=float)
    h0 = free_hamiltonian(mats, p, constants)
    h0_flip = free_hamiltonian(mats, -p, constants)
    sgn = sign_energy(p, constants)
    sgn_flip = sign_energy(-p, constants)
    h1 = interaction_hamiltonian(mats, fields)
    h1_parity = interaction_hamiltonian(
        mats, FieldConfig(A=tuple(-a for a in fields.A), Phi=fields.Phi, e_charge=fields.e_charge)
    )

    out: dict[str, float] = {}
    out["C_H0"] = _rel_residual(_apply(c, h0), -h0_flip)
    out["P_H0"] = _rel_residual(_apply(par, h0), h0_flip)
    out["tau_H0"] = _rel_residual(_apply(tau, h0), -h0_flip)
    out["C_sgnE"] = _rel_residual(_apply(c, sgn), -sgn_flip)
    out["P_sgnE"] = _rel_residual(_apply(par, sgn), sgn_flip)
    out["tau_sgnE"] = _rel_residual(_apply(tau, sgn), -sgn_flip)
    out["C_H1"] = _rel_residual(_apply(c, h1), h1)
    out["P_H1"] = _rel_residual(_apply(par, h1), h1_parity)
    out["tau_H1"] = _rel_residual(_apply(tau, h1), h1)
    out["D2_composite"] = _rel_residual(
        _apply(c, h0 + sgn @ h1), -(h0_flip + sgn_flip @ h1)
    )
    out["D1_breakdown"] = _rel_residual(_apply(c, h0 + h1), -(h0_flip - h1))
    return out


def appendix_identities(
    p,
    fields: FieldConfig | None = None,
    constants: Constants = DEFAULT_CONSTANTS,
) -> dict[str, float]:
    """Operator identities behind the equations of motion, for constant fields.

    With H = alpha . (p - eA) + beta m + e Phi (uniform fields treated as
    c-numbers):

    - momentum form: alpha_i (H - e Phi) + (H - e Phi) alpha_i = 2 (p - eA)_i I4;
    - spin form: (1/i) [Sigma_i, H] = 2 ((p - eA) x alpha)_i.

    Returns relative residuals per identity (worst component).
    """
    if fields is None:
        fields = FieldConfig()
    mats = build_matrices()
    p = np.asarray(p, dtype=float)
    e = fields.e_charge
    kin = p - e * np.asarray(fields.A, dtype=float)  # kinetic momentum p - eA
    h = constants.m * mats.beta + e * fields.Phi * _I4
    for ai, ki in zip(mats.alpha, kin):
        h = h + ki * ai

    worst_a3 = 0.0
    h_kin = h - e * fields.Phi * _I4
    for i, ai in enumerate(mats.alpha):
        lhs = ai @ h_kin + h_kin @ ai
        rhs = 2.0 * kin[i] * _I4
        worst_a3 = max(worst_a3, _rel_residual(lhs, rhs))

    worst_b3 = 0.0
    sigmas = spin_matrices()
    for i in range(3):
        lhs = (sigmas[i] @ h - h @ sigmas[i]) / 1.0j
        j, k = (i + 1) % 3, (i + 2) % 3
        rhs = 2.0 * (kin[j] * mats.alpha[k] - kin[k] * mats.alpha[j])
        worst_b3 = max(worst_b3, _rel_residual(lhs, rhs))

    return {"momentum_identity": worst_a3, "spin_identity": worst_b3}


# --- one-dimensional (spinless) reduction ------------------------------------


def dirac_matrices_1d() -> tuple[np.ndarray, np.ndarray]:
    """The 2x2 reduction used by the 1-D modules: alpha = sigma_x, beta = sigma_z."""
    return _PAULI[0].copy(), _PAULI[2].copy()


def spinor_u_1d(p: float, constants: Constants = DEFAULT_CONSTANTS) -> np.ndarray:
    """Unit-normalized +E eigenspinor of sigma_x p + sigma_z m."""
    m = constants.m
    e = (p * p + m * m) ** 0.5
    out = np.array([1.0, p / (e + m)], dtype=complex)
    return out / np.linalg.norm(out)


def spinor_v_1d(p: float, constants: Constants = DEFAULT_CONSTANTS) -> np.ndarray:
    """Unit-normalized -E eigenspinor of sigma_x p + sigma_z m."""
    m = constants.m
    e = (p * p + m * m) ** 0.5
    out = np.array([-p / (e + m), 1.0], dtype=complex)
    return out / np.linalg.norm(out)
