"""Time-dependent control schedules.

All quantities are dimensionless: times in units of 1/Omega and rates in
units of Omega, where Omega is the reference frequency (never assigned a
number, it only labels the unit).

The built-in family is

    rho(t)   = pi/2 - o - xi*sin(mu*t)
    theta(t) = zeta + sin(nu*t)
    alpha(t) = rho(t) * exp(i*theta(t))

with analytic derivatives throughout; finite differencing exists only as a
test oracle (the decoupling and propagator checks need derivative accuracy
well beyond differencing noise).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from .errors import NonPositiveWidth

__all__ = [
    "RhoThetaParams",
    "GammaSpec",
    "AlphaValue",
    "eval_rho_theta",
    "eval_alpha",
    "eval_gamma",
    "finite_diff_derivative",
]


@dataclass(frozen=True)
class RhoThetaParams:
    """Parameters of the polar-angle schedules rho(t) and theta(t).

    o > 0 keeps rho(0) bounded away from pi/2 (so sin(alpha(0)) ~ 1 without
    hitting the excluded point alpha = pi/2).
    """

    o: float = 0.01
    xi: float = 0.4 * math.pi
    mu: float = 0.5
    zeta: float = 0.08 * math.pi
    nu: float = 0.5

    def __post_init__(self) -> None:
        if not self.o > 0.0:
            raise ValueError(f"offset o must be > 0, got {self.o}")


@dataclass(frozen=True)
class GammaSpec:
    """Dissipation-rate profile: constant or a Gaussian bump.

    Gaussian mode evaluates omega_prime * exp(-((t - t0)/T)^2), so
    Gamma(t0) = omega_prime exactly and Gamma >= 0 everywhere.
    """

    mode: str = "constant"
    value: float = 0.0
    omega_prime: float = 0.0
    t0: float = 0.0
    T: float = 1.0

    def __post_init__(self) -> None:
        if self.mode not in ("constant", "gaussian"):
            raise ValueError(f"unknown gamma mode {self.mode!r}")
        if self.mode == "constant" and self.value < 0.0:
            raise ValueError("a dissipation rate cannot be negative")
        if self.mode == "gaussian":
            if self.omega_prime < 0.0:
                raise ValueError("a dissipation rate cannot be negative")
            if not self.T > 0.0:
                raise NonPositiveWidth(f"gaussian width must be > 0, got {self.T}")

    @classmethod
    def constant(cls, value: float) -> "GammaSpec":
        return cls(mode="constant", value=value)

    @classmethod
    def gaussian(cls, omega_prime: float, t0: float, T: float) -> "GammaSpec":
        return cls(mode="gaussian", omega_prime=omega_prime, t0=t0, T=T)


@dataclass(frozen=True)
class AlphaValue:
    """alpha(t) = rho*exp(i*theta) together with its analytic time derivative."""

    alpha: complex
    alpha_dot: complex
    rho: float
    theta: float
    rho_dot: float
    theta_dot: float


def eval_rho_theta(params: RhoThetaParams, t: float) -> tuple[float, float, float, float]:
    """Evaluate (rho, theta, rho_dot, theta_dot) at time t."""
    rho = 0.5 * math.pi - params.o - params.xi * math.sin(params.mu * t)
    theta = params.zeta + math.sin(params.nu * t)
    rho_dot = -params.xi * params.mu * math.cos(params.mu * t)
    theta_dot = params.nu * math.cos(params.nu * t)
    return rho, theta, rho_dot, theta_dot


def eval_alpha(params: RhoThetaParams, t: float) -> AlphaValue:
    """Evaluate the complex angle alpha(t) and alpha_dot(t) analytically.

    alpha_dot = (rho_dot + i*rho*theta_dot) * exp(i*theta) by the chain rule.
    """
    rho, theta, rho_dot, theta_dot = eval_rho_theta(params, t)
    phase = cmath.exp(1j * theta)
    return AlphaValue(
        alpha=rho * phase,
        alpha_dot=(rho_dot + 1j * rho * theta_dot) * phase,
        rho=rho,
        theta=theta,
        rho_dot=rho_dot,
        theta_dot=theta_dot,
    )


def eval_gamma(spec: GammaSpec, t: float) -> float:
    """Evaluate the dissipation rate Gamma(t) >= 0."""
    if spec.mode == "constant":
        return spec.value
    arg = (t - spec.t0) / spec.T
    return spec.omega_prime * math.exp(-arg * arg)


def finite_diff_derivative(f: Callable[[float], complex], t: float, h: float) -> complex:
    """Central difference (f(t+h) - f(t-h)) / (2h); test oracle for the
    analytic derivatives."""
    if not h > 0.0:
        raise ValueError(f"step h must be > 0, got {h}")
    return (f(t + h) - f(t - h)) / (2.0 * h)
