"""Chromatic derivatives, chromatic expansions and their numerics."""
from .chromdiff import Jet, JetKind, OperatorTable, build_table, kk_m_at_zero, to_chromatic, to_taylor
from .opoly import BUILTINS, CHEBYSHEV, HERMITE, HERRON, LEGENDRE, FamilySpec, get_family, power_family

__version__ = "0.1.0"

__all__ = [
    "BUILTINS", "CHEBYSHEV", "HERMITE", "HERRON", "LEGENDRE", "FamilySpec", "Jet", "JetKind",
    "OperatorTable", "build_table", "get_family", "kk_m_at_zero", "power_family",
    "to_chromatic", "to_taylor", "__version__",
]
