"""Two-state vectors, weak values and post-selection probabilities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, OrthogonalSelection, RangeError
from .qcore import Operator, PureState, arm_projector, inner, make_state, uniform_state

ORTHOGONALITY_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class TwoStateVector:
    """A pre-selected ket |pre> paired with a post-selected bra <post|."""

    pre: PureState
    post: PureState
    floor: float = ORTHOGONALITY_FLOOR

    def __post_init__(self):
        if self.pre.dim != self.post.dim:
            raise DimMismatch(f"pre has dim {self.pre.dim}, post has dim {self.post.dim}")
        ov = abs(inner(self.post, self.pre))
        if ov <= self.floor:
            raise OrthogonalSelection(
                f"|<post|pre>| = {ov:.3e} is at or below the orthogonality floor {self.floor:g}"
            )

    @property
    def dim(self) -> int:
        return self.pre.dim

    @property
    def overlap(self) -> complex:
        """<post|pre>."""
        return inner(self.post, self.pre)


def weak_value(tsv: TwoStateVector, op: Operator) -> complex:
    """<post|A|pre> / <post|pre>, returned unclamped."""
    if op.dim != tsv.dim:
        raise DimMismatch(f"operator dim {op.dim} does not match two-state dim {tsv.dim}")
    den = tsv.overlap
    if abs(den) <= tsv.floor:
        raise OrthogonalSelection(f"|<post|pre>| = {abs(den):.3e} below floor")
    num = np.vdot(tsv.post.amps, op.matrix @ tsv.pre.amps)
    return complex(num / den)


def arm_amplitudes(tsv: TwoStateVector) -> np.ndarray:
    """<post|Pi_i|pre> for every arm i; they sum to <post|pre>."""
    return np.conj(tsv.post.amps) * tsv.pre.amps


def arm_weak_values(tsv: TwoStateVector) -> np.ndarray:
    """Weak value of every arm projector, ordered by arm index.

    Equivalent to calling :func:`weak_value` with each
    :func:`~wvsim.qcore.arm_projector`, but done in one step.
    """
    den = tsv.overlap
    if abs(den) <= tsv.floor:
        raise OrthogonalSelection(f"|<post|pre>| = {abs(den):.3e} below floor")
    return arm_amplitudes(tsv) / den


def postselect_probability(tsv: TwoStateVector) -> float:
    return abs(tsv.overlap) ** 2


def alpha_beta_preselection(alpha: complex, beta: complex) -> PureState:
    """(alpha|R> - beta|L>) / sqrt(|alpha|^2 + |beta|^2).

    ``(4, 3)`` gives the 0.8|R> - 0.6|L> state of a 64/36 first splitter.
    """
    return make_state([alpha, -beta])


def alpha_beta_tsv(alpha: complex, beta: complex, post: PureState | None = None) -> TwoStateVector:
    """Two-state vector of the (alpha, beta) family, post-selected on the uniform state by default."""
    return TwoStateVector(alpha_beta_preselection(alpha, beta), post if post is not None else uniform_state(2))


def photon_count_rule_applies(alpha: complex, beta: complex, atol: float = 1e-12) -> bool:
    """Whether the detector-count reading (alpha extra photons right, beta missing left) holds.

    That reading needs real alpha, beta with alpha = beta + 1, i.e. weak
    values (alpha, -beta) under uniform post-selection.
    """
    a, b = complex(alpha), complex(beta)
    return abs(a.imag) <= atol and abs(b.imag) <= atol and abs(a.real - b.real - 1.0) <= atol


def projector_family(dim: int) -> list[Operator]:
    if dim < 1:
        raise RangeError("dim must be positive")
    return [arm_projector(dim, i) for i in range(dim)]
