"""Verification checks for the flipchains library."""

from .base_check import BaseCheck
from .cardinality_check import CardinalityCheck
from .congestion_check import CongestionCheck
from .flip_algebra_check import FlipAlgebraCheck
from .flip_path_check import FlipPathCheck
from .hierarchy_check import HierarchyCheck
from .irreducibility_check import IrreducibilityCheck
from .law_identity_check import LawIdentityCheck
from .models import CheckContext, CheckFailure, CheckResult, VerificationReport
from .replant_measure_check import ReplantMeasureCheck
from .runner import CHECK_CLASSES, Verifier
from .schaeffer_check import SchaefferRoundTripCheck
from .spectral_check import SpectralInequalityCheck

__all__ = [
    'BaseCheck',
    'CardinalityCheck',
    'CheckContext',
    'CheckFailure',
    'CheckResult',
    'CHECK_CLASSES',
    'CongestionCheck',
    'FlipAlgebraCheck',
    'FlipPathCheck',
    'HierarchyCheck',
    'IrreducibilityCheck',
    'LawIdentityCheck',
    'ReplantMeasureCheck',
    'SchaefferRoundTripCheck',
    'SpectralInequalityCheck',
    'VerificationReport',
    'Verifier',
]
