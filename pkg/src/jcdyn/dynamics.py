"""Closed-form resonant dynamics in the bare basis.

The interaction couples |e,n> only with |g,n+1>, so evolution factors into
independent 2x2 rotations whose angle is the coupling area scaled by
sqrt(n+1). Pure joint states evolve amplitude-wise. Field mixtures that are
diagonal in photon number evolve sector by sector, which never materializes
a joint density matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coupling import coupling_area
from .errors import InvalidInputError
from .fields import PhotonDistribution

_NORM_TOL = 1e-12
_RHO_TOL = 1e-10


@dataclass(frozen=True)
class AtomState:
    """Pure two-level state c_e |e> + c_g |g>, normalized to 1e-12."""

    c_e: complex
    c_g: complex

    def __post_init__(self):
        try:
            ce, cg = complex(self.c_e), complex(self.c_g)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError("atom amplitudes must be numbers") from exc
        object.__setattr__(self, "c_e", ce)
        object.__setattr__(self, "c_g", cg)
        if not all(
            math.isfinite(v) for v in (ce.real, ce.imag, cg.real, cg.imag)
        ):
            raise InvalidInputError("atom amplitudes must be finite")
        norm = abs(ce) ** 2 + abs(cg) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise InvalidInputError(f"atom state norm {norm!r} deviates from 1")

    @classmethod
    def excited(cls):
        return cls(1.0 + 0.0j, 0.0 + 0.0j)

    @classmethod
    def ground(cls):
        return cls(0.0 + 0.0j, 1.0 + 0.0j)

    @classmethod
    def plus_x(cls):
        """Equal superposition (|e> + |g>)/sqrt(2), the +1 eigenstate of sigma_x."""
        s = 1.0 / math.sqrt(2.0)
        return cls(complex(s), complex(s))


@dataclass(frozen=True)
class JointPureState:
    """Joint atom-field amplitudes at one instant.

    ``amps_e[n]`` multiplies |e,n>, ``amps_g[n]`` multiplies |g,n>. Both
    arrays share one length chosen large enough that the topmost retained
    block closes, so evolution is exactly unitary on this representation.
    """

    amps_e: np.ndarray
    amps_g: np.ndarray
    time: float

    def __post_init__(self):
        e = np.asarray(self.amps_e, dtype=complex)
        g = np.asarray(self.amps_g, dtype=complex)
        if e.ndim != 1 or e.shape != g.shape or e.size == 0:
            raise InvalidInputError("amplitude arrays must be 1-D and equal length")
        if not (np.all(np.isfinite(e)) and np.all(np.isfinite(g))):
            raise InvalidInputError("amplitudes must be finite")
        if not (math.isfinite(self.time) and self.time >= 0.0):
            raise InvalidInputError("time must be finite and non-negative")
        object.__setattr__(self, "amps_e", e)
        object.__setattr__(self, "amps_g", g)

    @property
    def n_levels(self) -> int:
        return self.amps_e.size

    def norm(self) -> float:
        """Total occupation, 1 up to the truncated tail of the field."""
        return float(
            np.sum(np.abs(self.amps_e) ** 2) + np.sum(np.abs(self.amps_g) ** 2)
        )


@dataclass(frozen=True)
class AtomDensityMatrix:
    """Reduced 2x2 atomic density matrix.

    ``rho_eg`` is the true off-diagonal element <e|rho|g>; the conjugate
    element is implied by Hermiticity.
    """

    rho_ee: float
    rho_gg: float
    rho_eg: complex

    def __post_init__(self):
        try:
            ee, gg = float(self.rho_ee), float(self.rho_gg)
            eg = complex(self.rho_eg)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(
                "populations must be real, coherence complex"
            ) from exc
        object.__setattr__(self, "rho_ee", ee)
        object.__setattr__(self, "rho_gg", gg)
        object.__setattr__(self, "rho_eg", eg)
        if not all(math.isfinite(v) for v in (ee, gg, eg.real, eg.imag)):
            raise InvalidInputError("density matrix entries must be finite")
        if ee < -_RHO_TOL or gg < -_RHO_TOL:
            raise InvalidInputError("populations must be non-negative")
        if abs(ee + gg - 1.0) > _RHO_TOL:
            raise InvalidInputError(f"trace {ee + gg!r} deviates from 1")
        if abs(eg) ** 2 > ee * gg + _RHO_TOL:
            raise InvalidInputError("coherence exceeds the positivity bound")

    @classmethod
    def from_atom_state(cls, state: AtomState):
        # Divide by the squared norm so the trace is exactly 1 even when
        # |c|^2 rounding leaves it an ulp off (e.g. the sigma_x eigenstate).
        p_e = abs(state.c_e) ** 2
        p_g = abs(state.c_g) ** 2
        total = p_e + p_g
        return cls(
            p_e / total,
            p_g / total,
            state.c_e * state.c_g.conjugate() / total,
        )

    def as_matrix(self) -> np.ndarray:
        """2x2 array in the (|e>, |g>) basis."""
        return np.array(
            [
                [self.rho_ee, self.rho_eg],
                [self.rho_eg.conjugate(), self.rho_gg],
            ],
            dtype=complex,
        )


def block_angle(n, area) -> float:
    """Rotation angle area * sqrt(n + 1) of the (|e,n>, |g,n+1>) block."""
    if not (isinstance(n, (int, np.integer)) and not isinstance(n, bool) and n >= 0):
        raise InvalidInputError("n must be a non-negative integer")
    if not (isinstance(area, (int, float)) and math.isfinite(area)):
        raise InvalidInputError("area must be a finite number")
    return float(area) * math.sqrt(n + 1.0)


def _check_time(t):
    if not (isinstance(t, (int, float)) and math.isfinite(t) and t >= 0.0):
        raise InvalidInputError("t must be a finite non-negative number")
    return float(t)


def evolve_pure(
    atom: AtomState, field: PhotonDistribution, profile, t
) -> JointPureState:
    """Joint state at time t for a pure field, from initial product state.

    Each block n rotates (amps_e[n], amps_g[n+1]) by the angle
    A(t) * sqrt(n+1) with the off-diagonal picking up -i. The arrays carry
    one slot beyond the field cutoff so the top block stays closed.
    """
    if field.amplitudes is None:
        raise InvalidInputError(
            "field is mixed; evolve_mixed handles diagonal mixtures"
        )
    t = _check_time(t)
    size = field.n_max + 2
    e0 = np.zeros(size, dtype=complex)
    g0 = np.zeros(size, dtype=complex)
    e0[:-1] = atom.c_e * field.amplitudes
    g0[:-1] = atom.c_g * field.amplitudes
    if t == 0.0:
        return JointPureState(e0, g0, 0.0)
    theta = coupling_area(profile, t) * np.sqrt(np.arange(1.0, size))
    c = np.cos(theta)
    s = np.sin(theta)
    e1 = np.empty(size, dtype=complex)
    g1 = np.empty(size, dtype=complex)
    e1[:-1] = c * e0[:-1] - 1j * s * g0[1:]
    e1[-1] = 0.0
    g1[1:] = c * g0[1:] - 1j * s * e0[:-1]
    g1[0] = g0[0]
    return JointPureState(e1, g1, t)


def evolve_mixed(
    atom: AtomDensityMatrix, field: PhotonDistribution, profile, t
) -> AtomDensityMatrix:
    """Reduced atomic state at time t for a photon-number-diagonal field.

    Tracing the field out of each sector's 2x2 rotation gives populations
    mixed by cos^2/sin^2 factors and a coherence damped by the overlap
    sum_n P_n cos(A sqrt(n)) cos(A sqrt(n+1)).
    """
    t = _check_time(t)
    if t == 0.0:
        return atom
    area = coupling_area(profile, t)
    n = np.arange(field.n_max + 1.0)
    c_lo = np.cos(area * np.sqrt(n))
    s_lo = np.sin(area * np.sqrt(n))
    c_hi = np.cos(area * np.sqrt(n + 1.0))
    s_hi = np.sin(area * np.sqrt(n + 1.0))
    p = field.weights
    ee = atom.rho_ee * float(p @ c_hi**2) + atom.rho_gg * float(p @ s_lo**2)
    gg = atom.rho_ee * float(p @ s_hi**2) + atom.rho_gg * float(p @ c_lo**2)
    eg = atom.rho_eg * float(p @ (c_lo * c_hi))
    # The raw trace is (retained field mass) * tr(atom), short of 1 by the
    # truncated tail; condition on the retained sectors so the result is a
    # valid density matrix for any tail_epsilon.
    trace = ee + gg
    return AtomDensityMatrix(ee / trace, gg / trace, eg / trace)


def excitation_expectation(state: JointPureState) -> float:
    """Mean of the conserved excitation count n + sigma_z / 2."""
    n = np.arange(state.n_levels)
    weight_e = (n + 0.5) @ np.abs(state.amps_e) ** 2
    weight_g = (n - 0.5) @ np.abs(state.amps_g) ** 2
    return float(weight_e + weight_g)
