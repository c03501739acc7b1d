"""Exact simulator for pre- and post-selected light-matter experiments.

Anomalous weak values of an atom in a Mach-Zehnder interferometer, the
photon excess they imprint on laser beams through stimulated emission,
and the shifted emitter seen in spontaneous-emission interference.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DimMismatch, EnvelopeFailure, IndexOutOfRange, NoAcceptedTrials, OrthogonalSelection,
    ParseError, RangeError, ValidationError, WidthMismatch, WindowTooSmall, WVSimError,
    ZeroNorm, ZeroVector,
)
from .qcore import (  # noqa: E402
    L, R, Operator, PureState, apply, arm_projector, basis_state, beam_splitter, inner,
    make_state, retrodicted_state, uniform_state,
)
from .tsvf import (  # noqa: E402
    TwoStateVector, alpha_beta_preselection, alpha_beta_tsv, arm_weak_values,
    postselect_probability, weak_value,
)
