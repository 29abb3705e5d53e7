"""Young-function calculus, Matuszewska-Orlicz growth analysis and discrete
fractional Orlicz eigenvalue estimation."""

__version__ = "0.1.0"
