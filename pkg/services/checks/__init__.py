"""Verification of the structural claims on finite truncations."""

from services.checks.report import ReportBuilder
from services.checks.structure import (
    GradingId,
    check_coproduct_closure,
    check_product_closure,
    coradical_degree,
    filtration_report,
    grading_report,
    primitive_basis,
    verify_strict_grading,
)
from services.checks.suites import SUITE_NAMES, run_suite

__all__ = [
    "ReportBuilder",
    "GradingId",
    "check_coproduct_closure",
    "check_product_closure",
    "coradical_degree",
    "filtration_report",
    "grading_report",
    "primitive_basis",
    "verify_strict_grading",
    "SUITE_NAMES",
    "run_suite",
]
