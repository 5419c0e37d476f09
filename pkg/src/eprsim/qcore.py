"""Dense complex linear algebra on 2-, 4- and 8-dimensional polarization spaces.

States and operators for up to three photons. The index convention is fixed
once and used everywhere: photon factors are ordered left to right (photon 1,
2, 3) with the rightmost factor varying fastest, i.e. ``tensor`` is the plain
Kronecker product. The two-photon basis is therefore ordered
``(++, +-, -+, --)``.

``|+>`` and ``|->`` are the two linear polarization basis states; states at
other angles are real superpositions of them (``linear_polarization_state``).
States that differ only by a global phase describe the same physical
polarization; compare them with ``states_equal_up_to_phase``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ATOL_ALGEBRAIC",
    "ATOL_CONSISTENCY",
    "EIGENVALUE_FLOOR",
    "BellKind",
    "ConsistencyError",
    "DensityOperator",
    "PureState",
    "bell_state",
    "born_expectation",
    "linear_polarization_state",
    "maximally_mixed",
    "partial_trace",
    "projector",
    "states_equal_up_to_phase",
    "tensor",
]

# Centralized tolerances: exact algebra is checked at 1e-12, internal
# consistency checks (things that can only fail through a bug) at 1e-9.
ATOL_ALGEBRAIC = 1e-12
ATOL_CONSISTENCY = 1e-9
EIGENVALUE_FLOOR = -1e-10

_ALLOWED_DIMS = (2, 4, 8)


class ConsistencyError(RuntimeError):
    """An internal numerical consistency check failed."""


class BellKind(enum.Enum):
    """The four maximally entangled two-photon basis states."""

    PSI_MINUS = "psi_minus"
    PSI_PLUS = "psi_plus"
    PHI_PLUS = "phi_plus"
    PHI_MINUS = "phi_minus"


def _as_locked(array, dtype=complex):
    out = np.array(array, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PureState:
    """A normalized complex state vector on a 2-, 4- or 8-dimensional space.

    Parameters
    ----------
    amplitudes : array_like of complex
        Probability amplitudes in the fixed basis ordering. Must be unit
        norm within ``ATOL_ALGEBRAIC``; the constructor validates but never
        silently renormalizes.
    """

    amplitudes: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        amps = _as_locked(self.amplitudes)
        if amps.ndim != 1 or amps.shape[0] not in _ALLOWED_DIMS:
            raise ValueError(
                f"state vector must have length in {_ALLOWED_DIMS}, got shape {amps.shape}"
            )
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > ATOL_ALGEBRAIC:
            raise ValueError(f"state vector is not normalized: sum |a_i|^2 = {norm_sq!r}")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dim", int(amps.shape[0]))

    def inner(self, other: "PureState") -> complex:
        """Return ``<self|other>`` (conjugate-linear in ``self``)."""
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityOperator:
    """A density matrix: Hermitian, unit trace, positive semidefinite.

    Hermiticity and trace are checked at ``ATOL_ALGEBRAIC``; eigenvalues may
    dip to ``EIGENVALUE_FLOOR`` to allow for roundoff.
    """

    matrix: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        mat = _as_locked(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] not in _ALLOWED_DIMS:
            raise ValueError(
                f"density matrix must be square with dim in {_ALLOWED_DIMS}, got {mat.shape}"
            )
        if not np.allclose(mat, mat.conj().T, atol=ATOL_ALGEBRAIC, rtol=0.0):
            raise ValueError("density matrix is not Hermitian")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > ATOL_ALGEBRAIC:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        eigs = np.linalg.eigvalsh(mat)
        if float(eigs.min()) < EIGENVALUE_FLOOR:
            raise ValueError(f"density matrix has negative eigenvalue {eigs.min()!r}")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dim", int(mat.shape[0]))


def tensor(a, b):
    """Kronecker product of two states or two operators.

    Both operands must be the same kind (``PureState`` or
    ``DensityOperator``) and the product dimension must not exceed 8. The
    left operand owns the slower-varying indices.
    """
    if isinstance(a, PureState) and isinstance(b, PureState):
        if a.dim * b.dim > 8:
            raise ValueError(f"tensor dimension {a.dim * b.dim} exceeds the supported maximum 8")
        return PureState(np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator):
        if a.dim * b.dim > 8:
            raise ValueError(f"tensor dimension {a.dim * b.dim} exceeds the supported maximum 8")
        return DensityOperator(np.kron(a.matrix, b.matrix))
    raise TypeError(
        "tensor operands must both be PureState or both DensityOperator, "
        f"got {type(a).__name__} and {type(b).__name__}"
    )


_BELL_AMPLITUDES = {
    BellKind.PSI_MINUS: np.array([0, 1, -1, 0]) / np.sqrt(2.0),
    BellKind.PSI_PLUS: np.array([0, 1, 1, 0]) / np.sqrt(2.0),
    BellKind.PHI_PLUS: np.array([1, 0, 0, 1]) / np.sqrt(2.0),
    BellKind.PHI_MINUS: np.array([1, 0, 0, -1]) / np.sqrt(2.0),
}


def bell_state(kind: BellKind) -> PureState:
    """Return one of the four Bell states in the ``(++, +-, -+, --)`` basis."""
    return PureState(_BELL_AMPLITUDES[kind])


def linear_polarization_state(angle: float) -> PureState:
    """Single-photon state linearly polarized at ``angle`` radians.

    Returns ``(cos angle, sin angle)``. Angles differing by pi give the same
    physical state up to a global sign, so the inner product identity
    ``<state(a)|state(b)> = cos(a - b)`` holds exactly for all real inputs.
    """
    return PureState([np.cos(angle), np.sin(angle)])


def projector(psi: PureState) -> DensityOperator:
    """Rank-one projector ``|psi><psi|`` as a density operator."""
    return DensityOperator(np.outer(psi.amplitudes, psi.amplitudes.conj()))


def maximally_mixed(dim: int) -> DensityOperator:
    """The maximally mixed state ``I/dim``."""
    if dim not in _ALLOWED_DIMS:
        raise ValueError(f"dim must be in {_ALLOWED_DIMS}, got {dim}")
    return DensityOperator(np.eye(dim) / dim)


def born_expectation(rho: DensityOperator, phi: PureState) -> float:
    """Born-rule expectation ``<phi|rho|phi>`` as a real number in [0, 1].

    Raises
    ------
    ConsistencyError
        If the quadratic form has an imaginary part above
        ``ATOL_CONSISTENCY``, which cannot happen for valid inputs.
    """
    if rho.dim != phi.dim:
        raise ValueError(f"dimension mismatch: operator dim {rho.dim}, state dim {phi.dim}")
    value = complex(np.vdot(phi.amplitudes, rho.matrix @ phi.amplitudes))
    if abs(value.imag) > ATOL_CONSISTENCY:
        raise ConsistencyError(f"expectation value has imaginary part {value.imag!r}")
    return float(min(1.0, max(0.0, value.real)))


def states_equal_up_to_phase(a: PureState, b: PureState, atol: float = ATOL_CONSISTENCY) -> bool:
    """True when two states differ only by a global phase (``|<a|b>| = 1``)."""
    if a.dim != b.dim:
        return False
    return abs(abs(a.inner(b)) - 1.0) <= atol


def partial_trace(rho: DensityOperator, keep: int, factor_dims: tuple[int, ...] = (2, 2)) -> DensityOperator:
    """Trace out all tensor factors except ``keep`` (0-based, left to right).

    ``factor_dims`` must multiply to ``rho.dim`` and follow the package-wide
    left-to-right factor ordering.
    """
    dims = tuple(int(d) for d in factor_dims)
    if int(np.prod(dims)) != rho.dim:
        raise ValueError(f"factor dims {dims} do not multiply to {rho.dim}")
    if not 0 <= keep < len(dims):
        raise ValueError(f"keep index {keep} out of range for {len(dims)} factors")
    n = len(dims)
    arr = rho.matrix.reshape(dims + dims)
    remaining = list(range(n))
    while len(remaining) > 1:
        pos = next(p for p in range(len(remaining) - 1, -1, -1) if remaining[p] != keep)
        arr = np.trace(arr, axis1=pos, axis2=len(remaining) + pos)
        del remaining[pos]
    return DensityOperator(arr)
