"""Batch plotting for qexact campaign CSVs."""

from .render import FAMILY_FILES, FAMILY_SCHEMAS, FigureSpec, RenderResult, SchemaMismatch, render

__all__ = [
    "FAMILY_FILES",
    "FAMILY_SCHEMAS",
    "FigureSpec",
    "RenderResult",
    "SchemaMismatch",
    "render",
]
