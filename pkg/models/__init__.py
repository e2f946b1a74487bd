"""Data models for the ParQSym toolkit."""

from .schemas import (
    DiagramModel,
    TermModel,
    ElementModel,
    TensorTermModel,
    TensorModel,
    Classification,
    ClassifiedDiagramModel,
    EnumerationSummary,
    Counterexample,
    CheckParameters,
    CheckReport,
)

__all__ = [
    "DiagramModel",
    "TermModel",
    "ElementModel",
    "TensorTermModel",
    "TensorModel",
    "Classification",
    "ClassifiedDiagramModel",
    "EnumerationSummary",
    "Counterexample",
    "CheckParameters",
    "CheckReport",
]
