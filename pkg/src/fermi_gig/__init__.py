"""Gauge-invariant quasi-free (GIG) fermionic states, channels and semigroups.

The submodules are layered:

``matkernel``
    dense complex linear algebra with a compiled Jacobi eigensolver and a
    numpy fallback (``matkernel.BACKEND`` says which one is live)
``car``
    Jordan-Wigner representation of the canonical anticommutation relations
``gig``
    GIG states, symbols, moments and the Wolfe-Lieb dichotomy
``channels``
    EHK channels, their duals and the structure classifier
``semigroups``
    Lindblad generators, evolution, Mehler spectra, steady states, embedding
``condexp``
    mode-subspace conditional expectations and Petz recovery
``cli``
    the ``fermi-gig`` command-line tool
"""
from . import car, channels, condexp, gig, matkernel, semigroups
from .car import FermionRep, build_rep, field, field_dag, hat, second_quantize
from .channels import CompatiblePair, EHKChannel, classify, ehk_channel, ehk_dual
from .errors import *  # noqa: F401,F403
from .gig import GIGState, Symbol, gaussian_moment, is_gig, rho_from_symbol, symbol_of, wolfe_check
from .matkernel import BACKEND
from .semigroups import SemigroupParams, embed_check, evolve, generator_data, hermite_basis, steady_states
from .tolerances import Tolerances

__version__ = "0.1.0"
