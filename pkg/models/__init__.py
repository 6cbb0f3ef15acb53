"""
Data models for the Bateman-Horn toolkit.
"""

from .core import (
    EngineConfig, RunConfig, PrimeRange, ConstantEstimate, CountReport,
    Prediction, Chain, CrtPlan, RaySpec, Verdict, Direction, ChainKind
)
from .polynomial import IntPoly, PolyFamily, AdmissibilityReport, Irreducibility

__all__ = [
    'EngineConfig',
    'RunConfig',
    'PrimeRange',
    'ConstantEstimate',
    'CountReport',
    'Prediction',
    'Chain',
    'CrtPlan',
    'RaySpec',
    'Verdict',
    'Direction',
    'ChainKind',
    'IntPoly',
    'PolyFamily',
    'AdmissibilityReport',
    'Irreducibility',
]
