"""Exact computations on smooth tropical plane quartics: triangulations,
skeleta, divisors, theta characteristics, bitangents, hyperellipticity."""

__version__ = "0.1.0"
