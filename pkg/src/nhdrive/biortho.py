"""Biorthogonal eigenframes for N-level non-Hermitian systems.

A frame pairs a right-eigenvector matrix A (columns |phi_n>) with the left
partners A' = A^{-1} (rows <phihat_n|), so that A'A = AA' = 1 and a
Hamiltonian with spectrum {E_n} is assembled as H = sum_n |phi_n> E_n <phihat_n|.
Left projections use the left partner rows, not conjugate transposes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSpectrum, DimensionMismatch, SingularFrame

__all__ = [
    "BiorthogonalFrame",
    "Spectrum",
    "frame_from_matrix",
    "check_biorthogonality",
    "assemble_hamiltonian",
    "project_mode",
]


@dataclass(frozen=True)
class BiorthogonalFrame:
    """Right eigenvectors (columns of a_matrix) and left partners (rows of
    a_prime). Immutable after construction; safe to share across readers."""

    a_matrix: np.ndarray
    a_prime: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.a_matrix, dtype=complex)
        ap = np.asarray(self.a_prime, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"a_matrix must be square, got shape {a.shape}")
        if ap.shape != a.shape:
            raise DimensionMismatch(
                f"a_prime shape {ap.shape} does not match a_matrix shape {a.shape}"
            )
        object.__setattr__(self, "a_matrix", a)
        object.__setattr__(self, "a_prime", ap)

    @property
    def dim(self) -> int:
        return self.a_matrix.shape[0]

    def right_vector(self, n: int) -> np.ndarray:
        """|phi_n>, the n-th column of A."""
        return self.a_matrix[:, n]

    def left_vector(self, n: int) -> np.ndarray:
        """<phihat_n|, the n-th row of A'."""
        return self.a_prime[n, :]


@dataclass(frozen=True)
class Spectrum:
    """Nondegenerate eigenvalue list E_n."""

    eigenvalues: tuple = field(default_factory=tuple)

    def __post_init__(self) -> None:
        evs = tuple(complex(e) for e in self.eigenvalues)
        object.__setattr__(self, "eigenvalues", evs)
        n = len(evs)
        for i in range(n):
            for j in range(i + 1, n):
                if abs(evs[i] - evs[j]) == 0.0:
                    raise DegenerateSpectrum(
                        f"eigenvalues {i} and {j} coincide at {evs[i]}"
                    )

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def as_array(self) -> np.ndarray:
        return np.array(self.eigenvalues, dtype=complex)


def frame_from_matrix(a_matrix: np.ndarray, det_floor: float = 1e-10) -> BiorthogonalFrame:
    """Build a frame by inverting the eigenvector matrix.

    The determinant is checked against det_floor relative to the largest
    column norm (raised to N), so near-singular frames fail loudly instead
    of producing silently ill-conditioned left partners.
    """
    a = np.asarray(a_matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"a_matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    col_scale = float(np.max(np.linalg.norm(a, axis=0))) if n else 0.0
    det = complex(np.linalg.det(a))
    if col_scale == 0.0 or abs(det) <= det_floor * col_scale**n:
        raise SingularFrame(
            f"|det| = {abs(det):.3e} at or below floor "
            f"{det_floor:.1e} * (max column norm)^{n}"
        )
    a_prime = np.linalg.solve(a, np.eye(n, dtype=complex))
    return BiorthogonalFrame(a_matrix=a, a_prime=a_prime)


def check_biorthogonality(frame: BiorthogonalFrame) -> float:
    """Max-norm residual of both the pairing A'A = 1 and the closure AA' = 1."""
    eye = np.eye(frame.dim, dtype=complex)
    pairing = np.max(np.abs(frame.a_prime @ frame.a_matrix - eye))
    closure = np.max(np.abs(frame.a_matrix @ frame.a_prime - eye))
    return float(max(pairing, closure))


def assemble_hamiltonian(frame: BiorthogonalFrame, spectrum: Spectrum) -> np.ndarray:
    """H = sum_n |phi_n> E_n <phihat_n| = A diag(E) A'."""
    if spectrum.dim != frame.dim:
        raise DimensionMismatch(
            f"spectrum has {spectrum.dim} eigenvalues for a dim-{frame.dim} frame"
        )
    return frame.a_matrix @ (spectrum.as_array()[:, None] * frame.a_prime)


def project_mode(frame: BiorthogonalFrame, state: np.ndarray, n: int) -> complex:
    """Left-partner expansion coefficient <phihat_n | state>."""
    if not 0 <= n < frame.dim:
        raise IndexError(f"mode index {n} out of range for dim {frame.dim}")
    state = np.asarray(state, dtype=complex)
    if state.shape != (frame.dim,):
        raise DimensionMismatch(
            f"state shape {state.shape} does not match frame dim {frame.dim}"
        )
    return complex(frame.a_prime[n, :] @ state)
