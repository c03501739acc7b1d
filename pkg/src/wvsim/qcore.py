"""Dense complex linear algebra for the atom's arm degree of freedom.

Arm index 0 is the right arm R and index 1 the left arm L whenever a
two-arm interferometer is meant. States keep the phases they are given;
nothing strips a global phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch, IndexOutOfRange, RangeError, ZeroVector

R, L = 0, 1

_ATOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit-norm amplitude vector over the interferometer arms.

    ``norm_factor`` is the norm of the vector the state was built from.
    """

    amps: np.ndarray
    norm_factor: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "amps", _frozen(self.amps))
        if self.amps.ndim != 1:
            raise DimMismatch(f"state amplitudes must be a vector, got shape {self.amps.shape}")
        if not np.all(np.isfinite(self.amps)):
            raise RangeError("state amplitudes must be finite")

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def __len__(self):
        return self.dim

    def __repr__(self):
        return f"PureState({np.array2string(self.amps, precision=6)})"


@dataclass(frozen=True, eq=False)
class Operator:
    """A dim x dim complex matrix acting on arm states."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimMismatch(f"operator must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise RangeError("operator entries must be finite")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T)

    def is_hermitian(self, atol=_ATOL) -> bool:
        return np.allclose(self.matrix, self.matrix.conj().T, rtol=0, atol=atol)

    def is_projector(self, atol=_ATOL) -> bool:
        m = self.matrix
        return self.is_hermitian(atol) and np.allclose(m @ m, m, rtol=0, atol=atol)

    def is_unitary(self, atol=_ATOL) -> bool:
        m = self.matrix
        return np.allclose(m.conj().T @ m, np.eye(self.dim), rtol=0, atol=atol)

    def _check(self, other):
        if other.dim != self.dim:
            raise DimMismatch(f"operator dims differ: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        self._check(other)
        return Operator(self.matrix + other.matrix)

    def __sub__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        self._check(other)
        return Operator(self.matrix - other.matrix)

    def __mul__(self, scalar):
        if isinstance(scalar, Operator):
            return NotImplemented
        return Operator(complex(scalar) * self.matrix)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Operator):
            self._check(other)
            return Operator(self.matrix @ other.matrix)
        return NotImplemented


def make_state(amps) -> PureState:
    """Normalize ``amps`` into a :class:`PureState`.

    Raises
    ------
    ZeroVector
        If the vector is empty or all amplitudes vanish.
    """
    v = np.asarray(amps, dtype=complex).ravel()
    if v.size == 0:
        raise ZeroVector("cannot build a state from an empty amplitude vector")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ZeroVector("all amplitudes are zero")
    if not np.isfinite(norm):
        raise RangeError("state amplitudes must be finite")
    return PureState(v / norm, norm_factor=norm)


def basis_state(dim: int, arm: int) -> PureState:
    _check_arm(dim, arm)
    v = np.zeros(dim, dtype=complex)
    v[arm] = 1.0
    return PureState(v)


def uniform_state(dim: int) -> PureState:
    """Equal-weight superposition, e.g. the 50/50 retrodicted state for two arms."""
    if dim < 1:
        raise RangeError("dim must be positive")
    return make_state(np.ones(dim))


def inner(bra: PureState, ket: PureState) -> complex:
    """<bra|ket>, conjugate-linear in ``bra``."""
    if bra.dim != ket.dim:
        raise DimMismatch(f"state dims differ: {bra.dim} vs {ket.dim}")
    return complex(np.vdot(bra.amps, ket.amps))


def _check_arm(dim, arm):
    if dim < 1:
        raise RangeError("dim must be positive")
    if not 0 <= arm < dim:
        raise IndexOutOfRange(f"arm {arm} outside 0..{dim - 1}")


def arm_projector(dim: int, arm: int) -> Operator:
    _check_arm(dim, arm)
    m = np.zeros((dim, dim), dtype=complex)
    m[arm, arm] = 1.0
    return Operator(m)


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim, dtype=complex))


def beam_splitter(transmission: float, phase: float = 0.0) -> Operator:
    r"""Two-port beam splitter acting on (R, L) amplitudes.

    .. math::
        U = \begin{pmatrix} t & -r e^{i\phi} \\ -r e^{-i\phi} & -t \end{pmatrix},
        \quad t = \sqrt{T},\; r = \sqrt{1 - T}

    Reflection into the second port picks up the minus sign, so a 64%
    splitter sends |R> to 0.8|R> - 0.6|L>. ``U`` is Hermitian and unitary,
    hence a splitter applied twice is the identity.
    """
    transmission = float(transmission)
    if not 0.0 < transmission < 1.0:
        raise RangeError(f"transmission must lie in (0, 1), got {transmission}")
    t = np.sqrt(transmission)
    r = np.sqrt(1.0 - transmission)
    e = np.exp(1j * phase)
    return Operator(np.array([[t, -r * e], [-r * np.conj(e), -t]]))


def apply(op: Operator, state) -> np.ndarray:
    """Matrix-vector product; the result is deliberately left unnormalized."""
    v = state.amps if isinstance(state, PureState) else np.asarray(state, dtype=complex)
    if v.shape != (op.dim,):
        raise DimMismatch(f"operator dim {op.dim} does not match vector shape {v.shape}")
    return op.matrix @ v


def retrodicted_state(splitter: Operator, port: int) -> PureState:
    """State inside the interferometer that evolves into output ``port``.

    Clicking ``port`` after ``splitter`` post-selects <port|U, i.e. the
    ket U^dagger|port>.
    """
    return make_state(apply(splitter.dagger, basis_state(splitter.dim, port)))


def equal_up_to_phase(a, b, atol=1e-12) -> bool:
    """True if two vectors differ only by a global phase."""
    a = a.amps if isinstance(a, PureState) else np.asarray(a, dtype=complex)
    b = b.amps if isinstance(b, PureState) else np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    ov = np.vdot(a, b)
    if abs(ov) == 0:
        return np.allclose(a, b, rtol=0, atol=atol)
    return np.allclose(a * (ov / abs(ov)), b, rtol=0, atol=atol)
