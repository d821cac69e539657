"""Exact computations with group algebras, Cartan and decomposition
matrices, projective modules over p-adic orders, truncated Iwasawa algebras,
and the Auslander-Bridger transpose."""

__version__ = "0.1.0"

from .errors import WorkbenchError  # noqa: E402

__all__ = ["WorkbenchError", "__version__"]
