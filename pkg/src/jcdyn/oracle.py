"""Brute-force trajectory validator.

Integrates the bare-basis Schrodinger equation block by block with a
general-purpose ODE solver, sampling lambda(t) pointwise at every stage.
The integrator never sees the coupling area, so agreement with the
closed-form path validates the area-based solution end to end. All blocks
of a run are stacked into one flat state vector so the solver is called
once per trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .coupling import lambda_at
from .dynamics import AtomDensityMatrix, AtomState, JointPureState
from .errors import InvalidInputError, NumericalFailureError
from .fields import PhotonDistribution

ADAPTIVE = "adaptive"
RK4 = "rk4"

_EIGENWEIGHT_FLOOR = 1e-15


@dataclass(frozen=True)
class IntegratorConfig:
    """Settings for the reference integrator.

    ``max_step`` caps the adaptive step; the fixed-step rk4 method uses it
    as its step size outright, subdividing grid intervals evenly.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 0.1
    method: str = ADAPTIVE

    def __post_init__(self):
        for name, tol in (("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)):
            if not (
                isinstance(tol, (int, float)) and 0.0 < tol <= 1e-3
            ):
                raise InvalidInputError(f"{name} must lie in (0, 1e-3]")
        if not (
            isinstance(self.max_step, (int, float))
            and math.isfinite(self.max_step)
            and self.max_step > 0.0
        ):
            raise InvalidInputError("max_step must be finite and positive")
        if self.method not in (ADAPTIVE, RK4):
            raise InvalidInputError(f"method must be {ADAPTIVE!r} or {RK4!r}")


DEFAULT_CONFIG = IntegratorConfig()


@dataclass(frozen=True)
class DeviationReport:
    """Pointwise disagreement between two trajectories."""

    max_abs: float
    at_time: float
    rms: float


def _check_grid(t_grid):
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise InvalidInputError("t_grid must be a non-empty 1-D array")
    if not np.all(np.isfinite(grid)):
        raise InvalidInputError("t_grid must be finite")
    if grid[0] != 0.0:
        raise InvalidInputError("t_grid must start at 0")
    if grid.size > 1 and not np.all(np.diff(grid) > 0.0):
        raise InvalidInputError("t_grid must increase strictly")
    return grid


def _integrate_stack(blocks, y0, profile, t_grid, cfg):
    """Evolve stacked 2-level blocks; returns (T, B, 2) complex samples.

    Row i holds the (e, g) pair of block ``blocks[i]``, obeying
    i (d/dt)(c_e, c_g) = lambda(t) sqrt(n+1) (c_g, c_e).
    """
    grid = _check_grid(t_grid)
    y0 = np.asarray(y0, dtype=complex).reshape(-1, 2)
    t_end = float(grid[-1])
    if y0.shape[0] == 0 or t_end == 0.0:
        return np.broadcast_to(y0, (grid.size,) + y0.shape).copy()
    coef = -1j * np.sqrt(np.asarray(blocks, dtype=float) + 1.0)

    def lam(t):
        # Solver stages can round a hair outside [0, t_end]; clamp so
        # tabulated profiles stay in range.
        return lambda_at(profile, min(max(float(t), 0.0), t_end))

    if cfg.method == ADAPTIVE:

        def rhs(t, y):
            pairs = y.reshape(-1, 2)
            return (lam(t) * coef[:, None] * pairs[:, ::-1]).ravel()

        sol = solve_ivp(
            rhs,
            (0.0, t_end),
            y0.ravel(),
            method="DOP853",
            t_eval=grid,
            rtol=cfg.rel_tol,
            atol=cfg.abs_tol,
            max_step=cfg.max_step,
        )
        if not sol.success:
            raise NumericalFailureError(f"reference integrator failed: {sol.message}")
        out = np.ascontiguousarray(sol.y.T).reshape(grid.size, -1, 2)
    else:
        out = np.empty((grid.size,) + y0.shape, dtype=complex)
        out[0] = y0
        y = y0.copy()

        def deriv(t, y):
            return lam(t) * coef[:, None] * y[:, ::-1]

        for i in range(1, grid.size):
            t0, t1 = grid[i - 1], grid[i]
            m = max(1, math.ceil((t1 - t0) / cfg.max_step))
            h = (t1 - t0) / m
            for j in range(m):
                t = t0 + j * h
                k1 = deriv(t, y)
                k2 = deriv(t + 0.5 * h, y + 0.5 * h * k1)
                k3 = deriv(t + 0.5 * h, y + 0.5 * h * k2)
                k4 = deriv(t + h, y + h * k3)
                y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            out[i] = y
    if not np.all(np.isfinite(out.view(float))):
        raise NumericalFailureError("reference integrator produced non-finite values")
    return out


def integrate_block(n, initial, profile, t_grid, config=DEFAULT_CONFIG):
    """Trajectory of one (|e,n>, |g,n+1>) pair; returns a (T, 2) array."""
    if not (isinstance(n, (int, np.integer)) and not isinstance(n, bool) and n >= 0):
        raise InvalidInputError("n must be a non-negative integer")
    pair = np.asarray(initial, dtype=complex)
    if pair.shape != (2,):
        raise InvalidInputError("initial must be a pair of amplitudes")
    if not np.all(np.isfinite(pair.view(float))):
        raise InvalidInputError("initial amplitudes must be finite")
    return _integrate_stack([n], pair[None, :], profile, t_grid, config)[:, 0, :]


def oracle_evolve_pure(
    atom: AtomState,
    field: PhotonDistribution,
    profile,
    t_grid,
    config=DEFAULT_CONFIG,
) -> list[JointPureState]:
    """Numerically integrated counterpart of the closed-form pure evolution."""
    if field.amplitudes is None:
        raise InvalidInputError("field is mixed; oracle_evolve_mixed handles it")
    grid = _check_grid(t_grid)
    size = field.n_max + 2
    e0 = np.zeros(size, dtype=complex)
    g0 = np.zeros(size, dtype=complex)
    e0[:-1] = atom.c_e * field.amplitudes
    g0[:-1] = atom.c_g * field.amplitudes
    blocks = np.arange(size - 1)
    y0 = np.stack([e0[:-1], g0[1:]], axis=1)
    samples = _integrate_stack(blocks, y0, profile, grid, config)
    states = []
    for i, t in enumerate(grid):
        e = np.zeros(size, dtype=complex)
        g = np.zeros(size, dtype=complex)
        e[:-1] = samples[i, :, 0]
        g[1:] = samples[i, :, 1]
        g[0] = g0[0]  # dark component, untouched by the interaction
        states.append(JointPureState(e, g, float(t)))
    return states


def oracle_evolve_mixed(
    atom: AtomDensityMatrix,
    field: PhotonDistribution,
    profile,
    t_grid,
    config=DEFAULT_CONFIG,
) -> list[AtomDensityMatrix]:
    """Numerically integrated counterpart of the closed-form mixed evolution.

    Diagonalizes the atomic state and propagates each eigenvector against
    every retained photon sector, then re-assembles the partial trace. All
    sectors of all eigenvectors ride in a single solver call.
    """
    grid = _check_grid(t_grid)
    p = field.weights
    n_max = field.n_max
    vals, vecs = np.linalg.eigh(atom.as_matrix())
    members = []  # (weight, phi_e, phi_g, e_rows slice, g_rows slice)
    blocks = []
    y0_rows = []

    def push(block_ids, pairs):
        start = len(blocks)
        blocks.extend(block_ids)
        y0_rows.extend(pairs)
        return slice(start, len(blocks))

    for k in range(2):
        w_k = float(vals[k])
        if w_k < -1e-10:
            raise InvalidInputError("atom state has a negative eigenvalue")
        if w_k <= _EIGENWEIGHT_FLOOR:
            continue
        phi_e, phi_g = complex(vecs[0, k]), complex(vecs[1, k])
        e_slice = g_slice = None
        if phi_e != 0:
            e_slice = push(range(n_max + 1), [(phi_e, 0.0)] * (n_max + 1))
        if phi_g != 0 and n_max >= 1:
            g_slice = push(range(n_max), [(0.0, phi_g)] * n_max)
        members.append((w_k, phi_e, phi_g, e_slice, g_slice))

    if y0_rows:
        samples = _integrate_stack(blocks, y0_rows, profile, grid, config)
    else:
        samples = np.zeros((grid.size, 0, 2), dtype=complex)

    rho_ee = np.zeros(grid.size)
    rho_gg = np.zeros(grid.size)
    rho_eg = np.zeros(grid.size, dtype=complex)
    for w_k, phi_e, phi_g, e_slice, g_slice in members:
        a = np.zeros((grid.size, n_max + 1), dtype=complex)
        b = np.zeros_like(a)
        c = np.zeros_like(a)
        d = np.zeros_like(a)
        if e_slice is not None:
            a = samples[:, e_slice, 0]
            b = samples[:, e_slice, 1]
        if phi_g != 0:
            d[:, 0] = phi_g  # |g,0> is dark: constant amplitude
            if g_slice is not None:
                c[:, 1:] = samples[:, g_slice, 0]
                d[:, 1:] = samples[:, g_slice, 1]
        rho_ee += w_k * ((np.abs(a) ** 2 + np.abs(c) ** 2) @ p)
        rho_gg += w_k * ((np.abs(b) ** 2 + np.abs(d) ** 2) @ p)
        rho_eg += w_k * ((a * d.conjugate()) @ p)
    # Condition on the retained sectors exactly as evolve_mixed does, so
    # comparisons measure dynamics error rather than the truncation deficit.
    trace = rho_ee + rho_gg
    return [
        AtomDensityMatrix(rho_ee[i] / trace[i], rho_gg[i] / trace[i], rho_eg[i] / trace[i])
        for i in range(grid.size)
    ]


def compare_trajectories(a, b, times=None) -> DeviationReport:
    """Largest and root-mean-square pointwise gap between two trajectories.

    ``a`` and ``b`` are equal-shape arrays with time along the first axis;
    ``times`` (optional) labels that axis for the report.
    """
    x = np.asarray(a, dtype=complex)
    y = np.asarray(b, dtype=complex)
    if x.shape != y.shape or x.size == 0:
        raise InvalidInputError("trajectories must share a non-empty shape")
    diff = np.abs(x - y).reshape(x.shape[0], -1)
    per_time = diff.max(axis=1)
    idx = int(np.argmax(per_time))
    if times is not None:
        times = np.asarray(times, dtype=float)
        if times.shape != (x.shape[0],):
            raise InvalidInputError("times must match the trajectory length")
        at = float(times[idx])
    else:
        at = float(idx)
    return DeviationReport(
        max_abs=float(per_time[idx]),
        at_time=at,
        rms=float(np.sqrt(np.mean(diff**2))),
    )
