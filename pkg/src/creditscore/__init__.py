# Este archivo marca el paquete creditscore y expone la versión del proyecto.

"""
Credit score simulator - synthetic student cohorts, a linear performance
model fitted by batch gradient descent, and per-student credit scores.
"""

__version__ = "0.1.0"
__author__ = "Kratosvil"
__description__ = "Student activity simulation, gradient-descent regression and credit scoring"

__all__ = ["__version__"]
