"""Mod-ell surjectivity for products of elliptic curves over Q."""

__version__ = "0.1.0"

from ._kernels import BACKEND  # noqa: E402

__all__ = ["__version__", "BACKEND"]
