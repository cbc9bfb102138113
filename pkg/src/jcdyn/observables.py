"""Measured quantities derived from evolved states.

Everything here reduces to the 2x2 atomic density matrix: inversion and the
Bloch vector come straight from its entries, and the entanglement entropy
needs only its eigenvalues because the joint state's Schmidt rank is at
most 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coupling import ConstantCoupling, LinearCoupling, coupling_area
from .dynamics import AtomDensityMatrix, JointPureState
from .errors import InvalidInputError, NumericalFailureError
from .fields import PhotonDistribution

_CLAMP_TOL = 1e-10
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class SchmidtData:
    """Eigenvalues of the reduced atomic state, mu_plus >= mu_minus."""

    mu_plus: float
    mu_minus: float

    def __post_init__(self):
        mp_, mm = float(self.mu_plus), float(self.mu_minus)
        object.__setattr__(self, "mu_plus", mp_)
        object.__setattr__(self, "mu_minus", mm)
        if not (math.isfinite(mp_) and math.isfinite(mm)):
            raise InvalidInputError("eigenvalues must be finite")
        if not (0.0 <= mm <= mp_ <= 1.0):
            raise InvalidInputError("eigenvalues must satisfy 0 <= mu- <= mu+ <= 1")
        if abs(mp_ + mm - 1.0) > _CLAMP_TOL:
            raise InvalidInputError("eigenvalues must sum to 1")


@dataclass(frozen=True)
class BlochVector:
    """Bloch components of the atomic state and the vector's modulus."""

    r_x: float
    r_y: float
    r_z: float
    r: float

    def __post_init__(self):
        vals = (self.r_x, self.r_y, self.r_z, self.r)
        if not all(math.isfinite(float(v)) for v in vals):
            raise InvalidInputError("Bloch components must be finite")
        modulus = math.sqrt(self.r_x**2 + self.r_y**2 + self.r_z**2)
        if abs(modulus - self.r) > 1e-12:
            raise InvalidInputError("modulus inconsistent with components")
        if self.r > 1.0 + _CLAMP_TOL:
            raise InvalidInputError("Bloch vector leaves the unit ball")


def population_inversion(rho: AtomDensityMatrix) -> float:
    """W = rho_ee - rho_gg, the mean of sigma_z."""
    return rho.rho_ee - rho.rho_gg


def inversion_closed_form(field: PhotonDistribution, profile, t):
    """W(t) for an atom starting in |e>: sum_n P_n cos(2 A(t) sqrt(n+1)).

    Accepts a scalar or an array of times; the doubled angle is the one
    place the factor 2 enters the dynamics.
    """
    area = coupling_area(profile, t)
    scalar = np.ndim(area) == 0
    area_arr = np.atleast_1d(np.asarray(area, dtype=float))
    root = np.sqrt(np.arange(1.0, field.n_max + 2.0))
    w = np.cos(2.0 * area_arr[:, None] * root) @ field.weights
    return float(w[0]) if scalar else w


def coherence_xi(state: JointPureState) -> complex:
    """Cross-level overlap xi = sum_n conj(C_e,n) C_g,n.

    Note the conjugation order: the matrix element <e|rho|g> is conj(xi).
    """
    return complex(np.vdot(state.amps_e, state.amps_g))


def reduced_atom(state: JointPureState) -> AtomDensityMatrix:
    """Trace the field out of a joint pure state.

    The truncated field leaves the state norm short of 1 by up to
    tail_epsilon, so the matrix is conditioned on the retained levels to
    keep its trace at exactly 1.
    """
    p_e = float(np.sum(np.abs(state.amps_e) ** 2))
    p_g = float(np.sum(np.abs(state.amps_g) ** 2))
    eg = complex(np.vdot(state.amps_g, state.amps_e))
    total = p_e + p_g
    return AtomDensityMatrix(p_e / total, p_g / total, eg / total)


def atom_eigenvalues(rho: AtomDensityMatrix) -> SchmidtData:
    """Closed-form eigenvalues (1 +- r)/2 with r the Bloch modulus.

    Values straying past [0, 1] by at most 1e-10 are clamped; anything
    worse signals numerical failure upstream.
    """
    w = rho.rho_ee - rho.rho_gg
    r = math.sqrt(w**2 + 4.0 * abs(rho.rho_eg) ** 2)
    mu_plus = 0.5 * (1.0 + r)
    mu_minus = 0.5 * (1.0 - r)
    if mu_minus < -_CLAMP_TOL or mu_plus > 1.0 + _CLAMP_TOL:
        raise NumericalFailureError(
            f"eigenvalues ({mu_plus!r}, {mu_minus!r}) stray beyond [0, 1]",
            estimate=mu_minus,
        )
    return SchmidtData(min(mu_plus, 1.0), max(mu_minus, 0.0))


def von_neumann_entropy(rho: AtomDensityMatrix) -> float:
    """Entanglement entropy in bits, -sum mu log2 mu with 0 log 0 = 0."""
    data = atom_eigenvalues(rho)
    s = 0.0
    for mu in (data.mu_plus, data.mu_minus):
        if mu > 0.0:
            s -= mu * math.log2(mu)
    return s


def bloch_vector(rho: AtomDensityMatrix) -> BlochVector:
    """(r_x, r_y, r_z) = (2 Re rho_eg, -2 Im rho_eg, rho_ee - rho_gg)."""
    r_x = 2.0 * rho.rho_eg.real
    r_y = -2.0 * rho.rho_eg.imag
    r_z = rho.rho_ee - rho.rho_gg
    return BlochVector(r_x, r_y, r_z, math.sqrt(r_x**2 + r_y**2 + r_z**2))


def schmidt_state(state: JointPureState):
    """Eigenvalues and orthonormal eigenvectors of the reduced atom.

    Returns (SchmidtData, (v_plus, v_minus)) with each vector a length-2
    complex array in the (|e>, |g>) basis, largest component rotated to be
    real and non-negative. A degenerate pair falls back to the basis
    vectors so the output stays deterministic.
    """
    rho = reduced_atom(state)
    data = atom_eigenvalues(rho)
    a, d, b = rho.rho_ee, rho.rho_gg, rho.rho_eg
    if data.mu_plus - data.mu_minus <= _TIE_TOL or b == 0:
        up = np.array([1.0 + 0.0j, 0.0j])
        down = np.array([0.0j, 1.0 + 0.0j])
        return data, ((up, down) if a >= d else (down, up))
    # Two algebraically equivalent eigenvector forms; keep the larger one
    # for stability when mu+ nearly coincides with a diagonal entry.
    cand1 = np.array([b, data.mu_plus - a], dtype=complex)
    cand2 = np.array([data.mu_plus - d, b.conjugate()], dtype=complex)
    v_plus = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
    v_plus = v_plus / np.linalg.norm(v_plus)
    lead = v_plus[np.argmax(np.abs(v_plus))]
    v_plus = v_plus * (lead.conjugate() / abs(lead))
    v_minus = np.array([-v_plus[1].conjugate(), v_plus[0].conjugate()])
    lead = v_minus[np.argmax(np.abs(v_minus))]
    v_minus = v_minus * (lead.conjugate() / abs(lead))
    return data, (v_plus, v_minus)


def revival_time(field: PhotonDistribution, profile) -> float | None:
    """Predicted revival instant, or None when no closed form exists.

    Constant coupling revives near 2 pi sqrt(mean_n) / lambda0; a linear
    ramp squeezes that to 2 sqrt(pi sqrt(mean_n) / (lambda0 zeta1)).
    """
    if not field.mean_n > 0.0:
        raise InvalidInputError("revival prediction needs mean_n > 0")
    if isinstance(profile, ConstantCoupling):
        return 2.0 * math.pi * math.sqrt(field.mean_n) / profile.lambda0
    if isinstance(profile, LinearCoupling):
        return 2.0 * math.sqrt(
            math.pi * math.sqrt(field.mean_n) / (profile.lambda0 * profile.zeta1)
        )
    return None
