"""Higher-order SUSY partners of the harmonic oscillator.

Units hbar = m = omega = 1, H = -1/2 d^2/dx^2 + V with V0 = x^2/2.
"""

from .errors import HsusyError
from .grid import Grid, GridFunction
from .schrodinger import (SeedSolution, WaveFunction, eigenstate_seed, general_solution,
                          oscillator_eigenstate)
from .susy_chain import SusyChain, build_chain, oscillator_limit_chain
from .susy2_direct import SecondOrderTransform, complex_case, confluent_case, real_case
from .verify import spectrum_report

__version__ = "0.1.0"

__all__ = [
    "Grid", "GridFunction", "HsusyError", "SecondOrderTransform", "SeedSolution", "SusyChain",
    "WaveFunction", "build_chain", "complex_case", "confluent_case", "eigenstate_seed",
    "general_solution", "oscillator_eigenstate", "oscillator_limit_chain", "real_case",
    "spectrum_report",
]
