"""Accumulates check outcomes into a CheckReport."""

import logging
from typing import Iterable, List, Optional, Sequence

from config import settings
from models.schemas import CheckParameters, CheckReport, Counterexample
from services.algebra import Key, key_text

logger = logging.getLogger(__name__)

TRUNCATION_NOTE = "Checked on the truncation of diagram order"


def fmt_key(basis: str, key: Key) -> str:
    return f"{basis}{key_text(key)}"


def fmt_keys(basis: str, keys: Sequence[Key]) -> str:
    return " ⊗ ".join(fmt_key(basis, k) for k in keys)


class ReportBuilder:
    """Collects counterexamples, witnesses and notes for one suite."""

    def __init__(
        self,
        suite: str,
        max_order: int,
        q_values: Iterable[str] = (),
        sample_size: int = 0,
        seed: Optional[int] = None,
        limit: Optional[int] = None,
        expect_failures: bool = False,
    ):
        self.suite = suite
        self.parameters = CheckParameters(
            max_order=max_order, q_values=list(q_values), sample_size=sample_size, seed=seed
        )
        self.limit = limit or settings.max_counterexamples
        self.expect_failures = expect_failures
        self.checked = 0
        self.failures: List[Counterexample] = []
        self.witnesses: List[Counterexample] = []
        self.notes: List[str] = []
        self._dropped = 0
        self._dropped_witnesses = 0

    def fail(self, inputs: Sequence[str], term: str, detail: str = "") -> None:
        if len(self.failures) >= self.limit:
            self._dropped += 1
            return
        log = logger.debug if self.expect_failures else logger.warning
        log(f"[{self.suite}] counterexample {term} from {', '.join(inputs)}: {detail}")
        self.failures.append(Counterexample(inputs=list(inputs), term=term, detail=detail))

    def expect(self, ok: bool, inputs: Sequence[str], term: str, detail: str = "") -> bool:
        """Count one check; record a counterexample when it does not hold."""
        self.checked += 1
        if not ok:
            self.fail(inputs, term, detail)
        return ok

    def witness(self, inputs: Sequence[str], term: str, detail: str = "") -> None:
        logger.debug(f"[{self.suite}] witness {term}: {detail}")
        if len(self.witnesses) >= self.limit:
            self._dropped_witnesses += 1
            return
        self.witnesses.append(Counterexample(inputs=list(inputs), term=term, detail=detail))

    def note(self, text: str) -> None:
        self.notes.append(text)

    def absorb(self, report: CheckReport) -> None:
        """Fold a sub-report into this one."""
        self.checked += report.checked
        for c in report.counterexamples:
            self.fail([f"{report.suite}: {i}" for i in c.inputs] or [report.suite], c.term, c.detail)
        for w in report.witnesses:
            self.witness([f"{report.suite}: {i}" for i in w.inputs] or [report.suite], w.term, w.detail)
        self.notes.extend(f"{report.suite}: {n}" for n in report.notes if not n.startswith(TRUNCATION_NOTE))

    def build(self) -> CheckReport:
        notes = [
            f"{TRUNCATION_NOTE} <= {self.parameters.max_order}; "
            "graded components by length are infinite-dimensional and are only sampled."
        ] + self.notes
        if self._dropped:
            notes.append(f"{self._dropped} further counterexamples omitted")
        if self._dropped_witnesses:
            notes.append(f"{self._dropped_witnesses} further witnesses omitted")
        status = "fail" if self.failures else "pass"
        logger.info(f"Suite {self.suite}: {status} after {self.checked} checks")
        return CheckReport(
            suite=self.suite,
            parameters=self.parameters,
            status=status,
            checked=self.checked,
            counterexamples=self.failures,
            witnesses=self.witnesses,
            notes=notes,
        )
