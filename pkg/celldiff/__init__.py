# celldiff package initialization
"""
Simulation and analysis toolkit for a structured-population model of
stem-cell differentiation with cytokine feedback.
"""

__version__ = "1.0.0"
