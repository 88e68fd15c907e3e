"""Flat logarithmic connections, Riccati projectivization, numerical
monodromy and the projective lifting pipeline."""

from .algebra import (
    Spectrum,
    commuting,
    eigen_decompose,
    mat_exp,
    mat_log_normalized,
    sylvester_solve,
)
from .connections import (
    FuchsianSystem,
    GaugeSeries,
    LocalModel,
    LogConnection,
    flatness_check,
    poincare_defect,
    poincare_normalize,
    pullback_power,
    residue,
)
from .lifting import (
    LiftReport,
    ProjectivePresentation,
    lift_commuting,
    lifting_exponent,
    local_realize,
    realize_fuchsian,
    verify_lift_after_power,
)
from .monodromy import (
    ArcSegment,
    LineSegment,
    LoopPath,
    MonodromyRep,
    circle_loop,
    monodromy_rep,
    projective_monodromy,
    relation_check,
    standard_loops,
    transport,
)
from .projective import (
    ProjectiveClass,
    RiccatiSystem,
    nonresonant,
    proj_equal,
    projectivize,
    property_Pm,
    reconstruct,
    trace_free_lift,
)
from .ratfunc import RationalFunction

__version__ = "0.1.0"
