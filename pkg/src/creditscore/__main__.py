# Este archivo permite ejecutar la CLI como módulo Python usando: python -m creditscore

"""
Entry point for running the credit score simulator as a Python module.

Usage:
    python -m creditscore run-all --config pipeline.txt
"""

from .cli import main

if __name__ == "__main__":
    main()
