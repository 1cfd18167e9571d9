"""Exact workbench for left-symmetric conformal algebras and their extensions."""

from .core import Element, FreeModule, LambdaTable, OperatorTable
from .polyring import Poly

__all__ = ["Element", "FreeModule", "LambdaTable", "OperatorTable", "Poly"]
__version__ = "0.1.0"
