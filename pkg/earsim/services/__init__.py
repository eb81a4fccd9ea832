"""Services earsim: couvertures, simulation, oracles exacts"""
from .cover_service import CoverMethod, CoverService
from .simulator import CachingProvider, SimulationResult, Strategy, TupleProvider, ValueProvider, simulate_ear, solve_tuple
from .exact_service import BoundReport, DepthOracle, exact_min_depth, verify_bounds, verify_exhaustive

__all__ = [
    'CoverMethod', 'CoverService',
    'CachingProvider', 'SimulationResult', 'Strategy', 'TupleProvider', 'ValueProvider', 'simulate_ear', 'solve_tuple',
    'BoundReport', 'DepthOracle', 'exact_min_depth', 'verify_bounds', 'verify_exhaustive',
]
