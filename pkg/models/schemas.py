"""Pydantic schemas for the JSON documents read and written by the CLI."""

from typing import List, Literal, Optional, Union
from pydantic import BaseModel, Field


class DiagramModel(BaseModel):
    """A partition diagram; bottom nodes are negative column numbers."""

    order: int = Field(..., ge=0, description="Number of columns k")
    blocks: List[List[int]] = Field(..., description="Blocks of the set partition of {1..k, -1..-k}")


KeyModel = Union[DiagramModel, List[int]]


class TermModel(BaseModel):
    """One term of an element."""

    coeff: str = Field(..., description="Exact rational coefficient written as 'p/q'")
    key: KeyModel = Field(..., description="Diagram for ParSym/ParQSym, integer array for compositions")


class ElementModel(BaseModel):
    """A finite linear combination of basis elements."""

    space: str = Field(..., description="parsym, parqsym, qsym, nsym or sh")
    basis: str = Field(..., description="H, R, KQ, M, L, ETA, ETAQ or natural")
    q: Optional[str] = Field(None, description="Parameter q for the KQ and ETAQ bases")
    terms: List[TermModel] = Field(default_factory=list, description="Non-zero terms in canonical order")


class TensorTermModel(BaseModel):
    """One term of a tensor element."""

    coeff: str = Field(..., description="Exact rational coefficient written as 'p/q'")
    keys: List[KeyModel] = Field(..., description="One basis key per tensor factor")


class TensorModel(BaseModel):
    """An element of a tensor power, such as a coproduct."""

    space: str = Field(..., description="Space of every tensor factor")
    basis: str = Field(..., description="Basis of every tensor factor")
    q: Optional[str] = Field(None, description="Parameter q for the KQ and ETAQ bases")
    arity: int = Field(2, ge=1, description="Number of tensor factors")
    terms: List[TensorTermModel] = Field(default_factory=list, description="Non-zero terms in canonical order")


class Classification(BaseModel):
    """Predicate evaluations of a diagram."""

    matching: bool = Field(..., description="Every block has at most two nodes")
    perfect_matching: bool = Field(..., description="Every block has exactly two nodes")
    permuting: bool = Field(..., description="Every block has two nodes, one in each row")
    partial_permutation: bool = Field(..., description="Blocks of size one, or size two and propagating")
    isolated_upper: bool = Field(..., description="Every top node is a singleton block")
    planar: bool = Field(..., description="No two blocks cross on the boundary cycle")
    propagation_number: int = Field(..., description="Number of blocks meeting both rows")


class Counterexample(BaseModel):
    """A single violated (or, for witnesses, expectedly violated) claim."""

    inputs: List[str] = Field(..., description="Basis elements the check was run on")
    term: str = Field(..., description="Offending term or identity")
    detail: str = Field("", description="What was expected")


class CheckParameters(BaseModel):
    """Truncation and parameters of a verification run."""

    max_order: int = Field(..., ge=0, description="Largest diagram order examined")
    q_values: List[str] = Field(default_factory=list, description="q parameters examined")
    sample_size: int = Field(0, ge=0, description="Random cases drawn above the exhaustive order")
    seed: Optional[int] = Field(None, description="Seed of the random sampler")


class CheckReport(BaseModel):
    """Outcome of a verification suite; status is 'fail' iff counterexamples is non-empty."""

    suite: str = Field(..., description="Suite name")
    parameters: CheckParameters = Field(..., description="Run parameters")
    status: Literal["pass", "fail"] = Field(..., description="Overall outcome")
    checked: int = Field(0, ge=0, description="Number of individual identities checked")
    counterexamples: List[Counterexample] = Field(default_factory=list, description="Unexpected violations")
    witnesses: List[Counterexample] = Field(
        default_factory=list, description="Violations the theory predicts, reproduced"
    )
    notes: List[str] = Field(default_factory=list, description="Truncation notices and summaries")

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class ClassifiedDiagramModel(DiagramModel):
    """A diagram emitted by enumeration together with its predicate values."""

    classification: Classification = Field(..., description="Predicate evaluations")


class EnumerationSummary(BaseModel):
    """Final line of an enumeration."""

    count: int = Field(..., ge=0, description="Number of diagrams emitted")
