"""Constructive topological conjugacies between diagonal operators on l^p."""

from .conjugacy import (
    ConjugacyMap,
    DefectReport,
    build_conjugacy_to_doubling,
    build_conjugacy_to_halving,
    compose,
    conjugacy_defect,
    evaluate,
    identity_map,
    inverse,
)
from .errors import CertificateMismatch, DescriptorError, ExponentMismatch, HypothesisViolation, LpConjError
from .lp_core import (
    ConstantWeights,
    DiagonalOperator,
    FinSeq,
    HarmonicWeights,
    ListWeights,
    apply_diagonal,
    coordinate,
    norm_p,
    tail_sums,
)
from .probe import EscapeProfile, escape_profile, escape_time
from .rotation import PhaseWarp, phase_warp, phase_warp_inverse, rotation_forward, rotation_inverse
from .warp_map import ExponentSeq, WarpMap, exponents_from_weights, stable_power_diff, warp_forward, warp_inverse

__version__ = "0.1.0"
