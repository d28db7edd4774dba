"""Shortest zero products of matrix sets over finite fields."""

__version__ = "0.1.0"
SCHEMA_VERSION = 1

from ._backend import NAME as BACKEND  # noqa: E402
