"""
Semantics-preserving source transformations against code authorship attribution.
"""

from ._metadata import __author__, __version__

__all__ = ("__author__", "__version__")
