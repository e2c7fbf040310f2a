"""Reverse engineering of two-level non-Hermitian Hamiltonians.

Given the complex angle alpha(t) = rho(t)*exp(i*theta(t)), the eigenvectors
are fixed (up to normalization) by lambda = tan(alpha), which makes the
first instantaneous eigenstate exactly decoupled from the second: the
off-diagonal coupling <phihat_1|phidot_2> vanishes identically, so an
initial first-eigenstate component is transported without any leakage
kernel. What remains free is the eigenvalue difference Delta_E(t).

Two synthesis routes fix Delta_E:

* simple: Re[Delta_E] is user-chosen (large, to keep the gap open) and
  Im[Delta_E] = -Omega_3 cancels the imaginary part of the trace offset, so
  no dissipator is needed.
* dissipative: a dissipation rate Gamma(t) acting on the second bare level
  is prescribed, and Delta_E is solved from
      Im[Delta_E] = -Gamma - Omega_3
      Re[Delta_E] = -(Im[Delta_E]*(1 + Omega_2) + Omega_3) / Omega_1
  which enforces Im[delta] = Gamma with delta = Delta_E*cos(2*alpha). The
  division by Omega_1 is the singularity the guards watch.

Here Omega_1 = sin(2*rho*cos(theta))*sinh(-2*rho*sin(theta)),
Omega_2 = cos(2*rho*cos(theta))*cosh(2*rho*sin(theta)) and
Omega_3 = sin(2*rho*cos(theta))*cosh(2*rho*sin(theta)), so that
cos(2*alpha) = Omega_2 + i*Omega_1 exactly.

The driving-field components follow the complex-signal mapping
b_x = Delta_E, b_y = Im[delta] - i*Re[delta], b_z = delta.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .biortho import BiorthogonalFrame, Spectrum, assemble_hamiltonian
from .errors import ConsistencyViolation, SynthesisSingularity
from .schedules import AlphaValue, GammaSpec, RhoThetaParams, eval_alpha, eval_gamma

__all__ = [
    "SingularityGuards",
    "TwoLevelDesign",
    "FieldSample",
    "lambda_of_alpha",
    "eigenframe_two_level",
    "frame_dot_two_level",
    "eigenframe_constant_lambda",
    "frame_dot_constant_lambda",
    "omega_factors",
    "synthesize_dissipative",
    "synthesize_simple",
    "field_components",
    "ideal_relative_populations",
    "hamiltonian_full_form",
    "design_trace",
    "eigenvalue_trace",
    "frame_trace",
    "refined_phase_trace",
    "hamiltonian_fn",
    "as_schedule",
    "DEFAULT_GUARDS",
]


@dataclass(frozen=True)
class SingularityGuards:
    """Floors below which the synthesis refuses to emit spiked output."""

    omega1_floor: float = 1e-6
    cos_alpha_floor: float = 1e-6
    det_floor: float = 1e-10

    def __post_init__(self) -> None:
        if min(self.omega1_floor, self.cos_alpha_floor, self.det_floor) <= 0.0:
            raise ValueError("all guard floors must be strictly positive")


DEFAULT_GUARDS = SingularityGuards()


@dataclass(frozen=True)
class TwoLevelDesign:
    """One time point of the synthesized design."""

    t: float
    alpha: AlphaValue
    lam: complex
    delta_e: complex
    delta: complex
    gamma: float
    omega1: float
    omega2: float
    omega3: float
    hamiltonian: np.ndarray
    frame: BiorthogonalFrame

    @property
    def eigenvalues(self) -> tuple[complex, complex]:
        """(E_1, E_2) of the realized Hamiltonian: -Delta_E/2 - i*Gamma/2 and
        +Delta_E/2 - i*Gamma/2 (real trace offset already removed)."""
        shift = -0.5j * self.gamma
        return (-0.5 * self.delta_e + shift, 0.5 * self.delta_e + shift)


@dataclass(frozen=True)
class FieldSample:
    """Complex driving-field components at one time point (units of Omega)."""

    t: float
    b_x: complex
    b_y: complex
    b_z: complex


def _alpha_complex(alpha: AlphaValue | complex) -> complex:
    return alpha.alpha if isinstance(alpha, AlphaValue) else complex(alpha)


def lambda_of_alpha(alpha: AlphaValue | complex, cos_alpha_floor: float = 1e-6) -> complex:
    """lambda = tan(alpha), rejecting alpha too close to a half-integer
    multiple of pi (where the eigenframe turns singular)."""
    a = _alpha_complex(alpha)
    ca = cmath.cos(a)
    if abs(ca) <= cos_alpha_floor:
        raise ConsistencyViolation(
            f"|cos(alpha)| = {abs(ca):.3e} at alpha = {a}: too close to a "
            "half-integer multiple of pi"
        )
    return cmath.sin(a) / ca


def _sin_cos_guarded(alpha: AlphaValue | complex, floor: float) -> tuple[complex, complex]:
    a = _alpha_complex(alpha)
    sa, ca = cmath.sin(a), cmath.cos(a)
    if abs(ca) <= floor or abs(sa) <= floor:
        raise ConsistencyViolation(
            f"alpha = {a} is within {floor:.1e} of a half-integer multiple of pi"
        )
    return sa, ca


def eigenframe_two_level(
    alpha: AlphaValue | complex, cos_alpha_floor: float = 1e-6
) -> BiorthogonalFrame:
    """The tan(alpha) eigenframe with its exact analytic inverse.

    Columns of A: (-sin^2(a)/cos(a), cos(a)) and (sin(a), sin(a)); A' is
    written down directly rather than inverted numerically, so decoupling
    checks are not polluted by inversion error.
    """
    sa, ca = _sin_cos_guarded(alpha, cos_alpha_floor)
    a = np.array([[-sa * sa / ca, sa], [ca, sa]], dtype=complex)
    a_prime = np.array([[-ca, ca], [ca * ca / sa, sa]], dtype=complex)
    return BiorthogonalFrame(a_matrix=a, a_prime=a_prime)


def frame_dot_two_level(
    alpha: AlphaValue, cos_alpha_floor: float = 1e-6
) -> np.ndarray:
    """Analytic d/dt of the tan(alpha) eigenvector matrix."""
    sa, ca = _sin_cos_guarded(alpha, cos_alpha_floor)
    ad = alpha.alpha_dot
    return ad * np.array(
        [[-sa * (1.0 + ca * ca) / (ca * ca), ca], [-sa, ca]], dtype=complex
    )


def eigenframe_constant_lambda(
    alpha: AlphaValue | complex, lam: complex, cos_alpha_floor: float = 1e-6
) -> BiorthogonalFrame:
    """Alternative eigenframe with a fixed mixing constant lambda.

    Unlike the tan(alpha) frame this leaves both off-diagonal couplings
    nonzero (equal to +/- alpha_dot); it exists to exercise the propagator
    diagnostics, not for field synthesis.
    """
    if lam == 0:
        raise ConsistencyViolation("constant lambda must be nonzero")
    sa, ca = _sin_cos_guarded(alpha, cos_alpha_floor)
    a = np.array([[-lam * sa, lam * ca], [ca, sa]], dtype=complex)
    a_prime = np.array([[-sa / lam, ca], [ca / lam, sa]], dtype=complex)
    return BiorthogonalFrame(a_matrix=a, a_prime=a_prime)


def frame_dot_constant_lambda(
    alpha: AlphaValue, lam: complex, cos_alpha_floor: float = 1e-6
) -> np.ndarray:
    """Analytic d/dt of the constant-lambda eigenvector matrix."""
    sa, ca = _sin_cos_guarded(alpha, cos_alpha_floor)
    ad = alpha.alpha_dot
    return ad * np.array([[-lam * ca, -lam * sa], [-sa, ca]], dtype=complex)


def omega_factors(rho: float, theta: float) -> tuple[float, float, float]:
    """(Omega_1, Omega_2, Omega_3) hyperbolic factors of cos(2*alpha) and
    Im[sin(2*alpha)]-type terms for alpha = rho*exp(i*theta)."""
    u = 2.0 * rho * math.cos(theta)
    v = 2.0 * rho * math.sin(theta)
    su, cu = math.sin(u), math.cos(u)
    return (su * math.sinh(-v), cu * math.cosh(v), su * math.cosh(v))


def _pauli_hamiltonian(delta_e: complex, delta: complex, gamma: float) -> np.ndarray:
    # H = (Delta_E sx - i delta sy + Re[delta] sz)/2 + i diag(0, -Gamma);
    # for gamma == 0 the full complex delta sits on the diagonal instead.
    if gamma == 0.0:
        dz = delta
        decay = 0.0
    else:
        dz = complex(delta.real)
        decay = gamma
    return np.array(
        [
            [0.5 * dz, 0.5 * (delta_e - delta)],
            [0.5 * (delta_e + delta), -0.5 * dz - 1j * decay],
        ],
        dtype=complex,
    )


def synthesize_dissipative(
    params: RhoThetaParams,
    gamma: GammaSpec,
    t: float,
    guards: SingularityGuards = DEFAULT_GUARDS,
) -> TwoLevelDesign:
    """Solve the synthesis equations for a prescribed dissipation rate.

    Inverts the Gamma relation for Im[Delta_E], then the trace-cancellation
    condition for Re[Delta_E]. By construction Im[delta] = Gamma at every
    non-singular point. The realized Hamiltonian is
    (Delta_E sx - i delta sy + Re[delta] sz)/2 + i diag(0, -Gamma).
    """
    av = eval_alpha(params, t)
    o1, o2, o3 = omega_factors(av.rho, av.theta)
    if abs(o1) <= guards.omega1_floor:
        raise SynthesisSingularity(
            f"|Omega_1| = {abs(o1):.3e} at t = {t}: field synthesis singular"
        )
    g = eval_gamma(gamma, t)
    im_de = -g - o3
    re_de = -(im_de * (1.0 + o2) + o3) / o1
    delta_e = complex(re_de, im_de)
    if abs(delta_e) == 0.0:
        raise ConsistencyViolation(f"Delta_E = 0 at t = {t}")
    lam = lambda_of_alpha(av, guards.cos_alpha_floor)
    delta = delta_e * complex(o2, o1)  # cos(2*alpha) = Omega_2 + i*Omega_1
    return TwoLevelDesign(
        t=t,
        alpha=av,
        lam=lam,
        delta_e=delta_e,
        delta=delta,
        gamma=g,
        omega1=o1,
        omega2=o2,
        omega3=o3,
        hamiltonian=_pauli_hamiltonian(delta_e, delta, g),
        frame=eigenframe_two_level(av, guards.cos_alpha_floor),
    )


def as_schedule(value: float | Callable[[float], float]) -> Callable[[float], float]:
    """Wrap a constant as a time schedule; pass callables through."""
    if callable(value):
        return value
    const = float(value)
    return lambda t: const


def synthesize_simple(
    params: RhoThetaParams,
    re_delta_e: float | Callable[[float], float],
    t: float,
    guards: SingularityGuards = DEFAULT_GUARDS,
) -> TwoLevelDesign:
    """Dissipation-free synthesis: Re[Delta_E] is user-chosen, and
    Im[Delta_E] = -Omega_3 keeps the tracked mode free of net gain/loss."""
    av = eval_alpha(params, t)
    o1, o2, o3 = omega_factors(av.rho, av.theta)
    re = as_schedule(re_delta_e)(t)
    if re == 0.0:
        raise ConsistencyViolation(f"Re[Delta_E] = 0 at t = {t}")
    delta_e = complex(re, -o3)
    lam = lambda_of_alpha(av, guards.cos_alpha_floor)
    delta = delta_e * complex(o2, o1)
    return TwoLevelDesign(
        t=t,
        alpha=av,
        lam=lam,
        delta_e=delta_e,
        delta=delta,
        gamma=0.0,
        omega1=o1,
        omega2=o2,
        omega3=o3,
        hamiltonian=_pauli_hamiltonian(delta_e, delta, 0.0),
        frame=eigenframe_two_level(av, guards.cos_alpha_floor),
    )


def field_components(design: TwoLevelDesign) -> FieldSample:
    """Complex-signal field components realizing the designed Hamiltonian."""
    de, d = design.delta_e, design.delta
    return FieldSample(
        t=design.t,
        b_x=complex(de.real, de.imag),
        b_y=complex(d.imag, -d.real),
        b_z=complex(d.real, d.imag),
    )


def ideal_relative_populations(
    alpha: AlphaValue | complex, cos_alpha_floor: float = 1e-6
) -> tuple[float, float]:
    """Relative bare-state populations of the first eigenvector alone.

    These depend only on the alpha(t) design; they are the prediction the
    integrated dynamics is compared against.
    """
    sa, ca = _sin_cos_guarded(alpha, cos_alpha_floor)
    p1 = abs(sa * sa / ca) ** 2
    p2 = abs(ca) ** 2
    total = p1 + p2
    return p1 / total, p2 / total


def hamiltonian_full_form(design: TwoLevelDesign, e1: complex) -> np.ndarray:
    """The Hamiltonian with the first eigenvalue left explicit:
    [[E1 + Delta_E cos^2(a), Delta_E sin^2(a)],
     [Delta_E cos^2(a), E1 + Delta_E sin^2(a)]]."""
    a = design.alpha.alpha
    sa2 = cmath.sin(a) ** 2
    ca2 = cmath.cos(a) ** 2
    de = design.delta_e
    e1 = complex(e1)
    return np.array(
        [[e1 + de * ca2, de * sa2], [de * ca2, e1 + de * sa2]], dtype=complex
    )


def design_trace(
    params: RhoThetaParams,
    gamma: GammaSpec,
    grid: Sequence[float],
    guards: SingularityGuards = DEFAULT_GUARDS,
    mode: str = "dissipative",
    re_delta_e: float | Callable[[float], float] = 100.0,
) -> list[TwoLevelDesign | None]:
    """Synthesize the design at every grid point; singular samples come back
    as None instead of aborting the whole trace."""
    out: list[TwoLevelDesign | None] = []
    for t in grid:
        try:
            if mode == "dissipative":
                out.append(synthesize_dissipative(params, gamma, float(t), guards))
            elif mode == "simple":
                out.append(synthesize_simple(params, re_delta_e, float(t), guards))
            else:
                raise ValueError(f"unknown synthesis mode {mode!r}")
        except (SynthesisSingularity, ConsistencyViolation):
            out.append(None)
    return out


def eigenvalue_trace(designs: Sequence[TwoLevelDesign]) -> np.ndarray:
    """(n_samples, 2) eigenvalue array for a trace of designs."""
    if any(d is None for d in designs):
        raise ConsistencyViolation("eigenvalue trace undefined across singular samples")
    return np.array([d.eigenvalues for d in designs], dtype=complex)


def frame_trace(
    params: RhoThetaParams,
    grid: Sequence[float],
    lambda_mode: str = "tan_alpha",
    lam: complex | None = None,
    cos_alpha_floor: float = 1e-6,
):
    """Eigenframes and their analytic time derivatives along a grid.

    lambda_mode 'tan_alpha' gives the exactly decoupled design;
    'constant' freezes lambda (default: tan(alpha(0))) so both couplings stay
    on, for propagator diagnostics.
    """
    from .adiabaticity import FrameTrace

    frames = []
    dots = []
    if lambda_mode == "constant" and lam is None:
        lam = lambda_of_alpha(eval_alpha(params, float(grid[0])), cos_alpha_floor)
    for t in grid:
        av = eval_alpha(params, float(t))
        if lambda_mode == "tan_alpha":
            frames.append(eigenframe_two_level(av, cos_alpha_floor))
            dots.append(frame_dot_two_level(av, cos_alpha_floor))
        elif lambda_mode == "constant":
            frames.append(eigenframe_constant_lambda(av, lam, cos_alpha_floor))
            dots.append(frame_dot_constant_lambda(av, lam, cos_alpha_floor))
        else:
            raise ValueError(f"unknown lambda_mode {lambda_mode!r}")
    return FrameTrace(grid=np.asarray(grid, dtype=float), frames=frames, frame_dots=dots)


def _synthesis_arrays(
    params: RhoThetaParams,
    gamma: GammaSpec,
    grid: np.ndarray,
    guards: SingularityGuards,
    mode: str,
    re_delta_e: float | Callable[[float], float],
) -> dict[str, np.ndarray]:
    """Vectorized synthesis quantities over a whole grid (no per-point
    objects); raises on any singular sample."""
    t = np.asarray(grid, dtype=float)
    rho = 0.5 * math.pi - params.o - params.xi * np.sin(params.mu * t)
    theta = params.zeta + np.sin(params.nu * t)
    rho_dot = -params.xi * params.mu * np.cos(params.mu * t)
    theta_dot = params.nu * np.cos(params.nu * t)
    phase = np.exp(1j * theta)
    alpha = rho * phase
    alpha_dot = (rho_dot + 1j * rho * theta_dot) * phase
    u = 2.0 * rho * np.cos(theta)
    v = 2.0 * rho * np.sin(theta)
    su, cu, chv = np.sin(u), np.cos(u), np.cosh(v)
    o1 = -su * np.sinh(v)
    o2 = cu * chv
    o3 = su * chv
    if mode == "dissipative":
        if gamma.mode == "constant":
            g = np.full_like(t, gamma.value)
        else:
            g = gamma.omega_prime * np.exp(-(((t - gamma.t0) / gamma.T) ** 2))
        if np.any(np.abs(o1) <= guards.omega1_floor):
            raise SynthesisSingularity("|Omega_1| at or below floor on the grid")
        im_de = -g - o3
        de = -(im_de * (1.0 + o2) + o3) / o1 + 1j * im_de
    elif mode == "simple":
        re_fn = as_schedule(re_delta_e)
        re = np.array([re_fn(float(x)) for x in t])
        if np.any(re == 0.0):
            raise ConsistencyViolation("Re[Delta_E] = 0 on the grid")
        g = np.zeros_like(t)
        de = re - 1j * o3
    else:
        raise ValueError(f"unknown synthesis mode {mode!r}")
    return {
        "alpha": alpha,
        "alpha_dot": alpha_dot,
        "omega1": o1,
        "omega2": o2,
        "omega3": o3,
        "gamma": g,
        "delta_e": de,
    }


def refined_phase_trace(
    params: RhoThetaParams,
    gamma: GammaSpec,
    grid: Sequence[float],
    guards: SingularityGuards = DEFAULT_GUARDS,
    mode: str = "dissipative",
    lambda_mode: str = "tan_alpha",
    lam: complex | None = None,
    re_delta_e: float | Callable[[float], float] = 100.0,
    refine: int = 4,
):
    """Accumulated phases on the requested grid, integrated on a refine-x
    denser internal grid.

    The synthesized eigenvalue traces are rough near the field peak, and
    phase quadrature at plotting-grade grids does not meet the convergence
    contract; since the design is analytic, densifying the quadrature grid
    costs nothing but evaluations. The returned PhaseTrace lives exactly on
    the requested grid samples.
    """
    from .adiabaticity import PhaseTrace, phase_from_samples

    grid = np.asarray(grid, dtype=float)
    n = len(grid)
    dense = np.linspace(grid[0], grid[-1], (n - 1) * refine + 1)
    dense[::refine] = grid  # keep the requested samples bit-exact
    arr = _synthesis_arrays(params, gamma, dense, guards, mode, re_delta_e)
    shift = -0.5j * arr["gamma"]
    eigs = np.stack(
        [-0.5 * arr["delta_e"] + shift, 0.5 * arr["delta_e"] + shift], axis=1
    )
    if lambda_mode == "tan_alpha":
        sa, ca = np.sin(arr["alpha"]), np.cos(arr["alpha"])
        floor = guards.cos_alpha_floor
        if np.any(np.abs(ca) <= floor) or np.any(np.abs(sa) <= floor):
            raise ConsistencyViolation(
                "alpha passes within the floor of a half-integer multiple of pi"
            )
        # <phihat_1|phidot_1> = alpha_dot*tan(alpha), <phihat_2|phidot_2> its
        # reciprocal-tangent partner
        diag = np.stack(
            [arr["alpha_dot"] * sa / ca, arr["alpha_dot"] * ca / sa], axis=1
        )
    elif lambda_mode == "constant":
        diag = np.zeros((len(dense), 2), dtype=complex)  # lambda_dot == 0
    else:
        raise ValueError(f"unknown lambda_mode {lambda_mode!r}")
    phases = phase_from_samples(dense, eigs, diag)
    return PhaseTrace(grid=grid, beta=phases.beta[::refine])


def hamiltonian_fn(
    params: RhoThetaParams,
    gamma: GammaSpec,
    guards: SingularityGuards = DEFAULT_GUARDS,
    mode: str = "dissipative",
    lambda_mode: str = "tan_alpha",
    lam: complex | None = None,
    re_delta_e: float | Callable[[float], float] = 100.0,
) -> Callable[[float], np.ndarray]:
    """A fast t -> H(t) closure for the integrator.

    The Hamiltonian is evaluated analytically from the schedules at every
    call (integrator stages included); nothing is precomputed or
    interpolated. Scalar math is used on the hot path.
    """
    if mode not in ("dissipative", "simple"):
        raise ValueError(f"unknown synthesis mode {mode!r}")
    o, xi, mu = params.o, params.xi, params.mu
    zeta, nu = params.zeta, params.nu
    o1_floor = guards.omega1_floor
    re_fn = as_schedule(re_delta_e)
    half_pi = 0.5 * math.pi

    if lambda_mode == "constant":
        if lam is None:
            lam = lambda_of_alpha(eval_alpha(params, 0.0), guards.cos_alpha_floor)
        lam_c = complex(lam)

        def h_constant(t: float) -> np.ndarray:
            if mode == "dissipative":
                d = synthesize_dissipative(params, gamma, t, guards)
            else:
                d = synthesize_simple(params, re_fn, t, guards)
            frame = eigenframe_constant_lambda(d.alpha, lam_c, guards.cos_alpha_floor)
            return assemble_hamiltonian(frame, Spectrum(d.eigenvalues))

        return h_constant
    if lambda_mode != "tan_alpha":
        raise ValueError(f"unknown lambda_mode {lambda_mode!r}")

    def entries_tan_alpha(t: float) -> tuple[complex, complex, complex, complex]:
        rho = half_pi - o - xi * math.sin(mu * t)
        theta = zeta + math.sin(nu * t)
        u = 2.0 * rho * math.cos(theta)
        v = 2.0 * rho * math.sin(theta)
        su, cu = math.sin(u), math.cos(u)
        chv = math.cosh(v)
        o1 = -su * math.sinh(v)
        o2 = cu * chv
        o3 = su * chv
        if mode == "dissipative":
            if abs(o1) <= o1_floor:
                raise SynthesisSingularity(
                    f"|Omega_1| = {abs(o1):.3e} at t = {t}: field synthesis singular"
                )
            if gamma.mode == "constant":
                g = gamma.value
            else:
                arg = (t - gamma.t0) / gamma.T
                g = gamma.omega_prime * math.exp(-arg * arg)
            im_de = -g - o3
            de = complex(-(im_de * (1.0 + o2) + o3) / o1, im_de)
            delta = de * complex(o2, o1)
            dz = delta.real
            return (
                complex(0.5 * dz),
                0.5 * (de - delta),
                0.5 * (de + delta),
                complex(-0.5 * dz, -g),
            )
        re = re_fn(t)
        if re == 0.0:
            raise ConsistencyViolation(f"Re[Delta_E] = 0 at t = {t}")
        de = complex(re, -o3)
        delta = de * complex(o2, o1)
        return 0.5 * delta, 0.5 * (de - delta), 0.5 * (de + delta), -0.5 * delta

    def h_tan_alpha(t: float) -> np.ndarray:
        h = np.empty((2, 2), dtype=complex)
        h[0, 0], h[0, 1], h[1, 0], h[1, 1] = entries_tan_alpha(t)
        return h

    # scalar hot path for the two-level integrator
    h_tan_alpha.entries_fn = entries_tan_alpha
    return h_tan_alpha
