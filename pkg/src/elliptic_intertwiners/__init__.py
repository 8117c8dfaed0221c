"""Numerical verification of elliptic intertwining operators for the Sklyanin algebra."""

from .context import DEFAULT_CONTEXT, ModuliContext

__all__ = ["DEFAULT_CONTEXT", "ModuliContext"]
