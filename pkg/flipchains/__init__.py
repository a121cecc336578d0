"""Flip chains on quadrangulations, their tree-side counterparts and the paths between them."""

from .chains import Chain, Kernel, build_kernel, make_chain, simulate
from .errors import FlipChainsError
from .maps import (FlipMove, FlipPath, PointedQuadrangulation, Quadrangulation,
                   canonical_code, decode, flip, flips_to_q0, make_q0)
from .schaeffer import SignedTree, phi, phi_inverse
from .spectral import gap_report, spectral_gap
from .trees import ColouredTree, Direction, enumerate_trees, from_code

__version__ = "0.1.0"

__all__ = [
    'Chain',
    'ColouredTree',
    'Direction',
    'FlipChainsError',
    'FlipMove',
    'FlipPath',
    'Kernel',
    'PointedQuadrangulation',
    'Quadrangulation',
    'SignedTree',
    'build_kernel',
    'canonical_code',
    'decode',
    'enumerate_trees',
    'flip',
    'flips_to_q0',
    'from_code',
    'gap_report',
    'make_chain',
    'make_q0',
    'phi',
    'phi_inverse',
    'simulate',
    'spectral_gap',
]
