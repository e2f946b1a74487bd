"""Text and JSON wire formats for diagrams, elements, tensors and reports."""

import json
import logging
from pathlib import Path
from typing import Any, List, Optional, Union

from pydantic import BaseModel, ValidationError

from models.schemas import (
    DiagramModel,
    ElementModel,
    TensorModel,
    TensorTermModel,
    TermModel,
)
from services.algebra import (
    Basis,
    Element,
    Key,
    Space,
    Tensor,
    format_scalar,
    parse_scalar,
)
from services.classical import make_composition
from services.diagram import Diagram, canonicalize
from services.errors import MalformedInputError

logger = logging.getLogger(__name__)

DIAGRAM_SPACES = (Space.PARSYM, Space.PARQSYM)

Document = Union[Diagram, tuple, Element, Tensor]


def diagram_to_model(d: Diagram) -> DiagramModel:
    return DiagramModel(order=d.order, blocks=[list(b) for b in d.blocks])


def diagram_from_model(model: DiagramModel) -> Diagram:
    return canonicalize(model.order, model.blocks)


def diagram_from_blocks(blocks: List[List[int]]) -> Diagram:
    """Compact form: the order is the largest column mentioned."""
    if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
        raise MalformedInputError(f"Expected a list of blocks, got {blocks!r}")
    columns = [abs(n) for b in blocks for n in b if isinstance(n, int)]
    return canonicalize(max(columns, default=0), blocks)


def parse_diagram(text: str) -> Diagram:
    """Read a diagram from compact text `[[1],[2,-1],[-2]]` or JSON `{"order":..,"blocks":..}`."""
    value = _loads(text)
    if isinstance(value, dict):
        return diagram_from_model(_validate(DiagramModel, value))
    return diagram_from_blocks(value)


def key_to_json(key: Key) -> Any:
    if isinstance(key, Diagram):
        return diagram_to_model(key).model_dump()
    return list(key)


def key_from_json(value: Any, space: Space) -> Key:
    if space in DIAGRAM_SPACES:
        if isinstance(value, DiagramModel):
            return diagram_from_model(value)
        if isinstance(value, dict):
            return diagram_from_model(_validate(DiagramModel, value))
        return diagram_from_blocks(value)
    if isinstance(value, DiagramModel) or not isinstance(value, list):
        raise MalformedInputError(f"{space.value} keys are compositions, got {value!r}")
    return make_composition(value)


def element_to_model(x: Element) -> ElementModel:
    return ElementModel(
        space=x.space.value,
        basis=x.basis.value,
        q=None if x.q is None else format_scalar(x.q),
        terms=[TermModel(coeff=format_scalar(c), key=key_to_json(k)) for k, c in x.sorted_terms()],
    )


def tensor_to_model(t: Tensor) -> TensorModel:
    return TensorModel(
        space=t.space.value,
        basis=t.basis.value,
        q=None if t.q is None else format_scalar(t.q),
        arity=t.arity,
        terms=[
            TensorTermModel(coeff=format_scalar(c), keys=[key_to_json(k) for k in keys])
            for keys, c in t.sorted_terms()
        ],
    )


def _metadata(space: str, basis: str):
    try:
        return Space(space), Basis(basis)
    except ValueError as e:
        raise MalformedInputError(f"Unknown space/basis {space}/{basis}") from e


def element_from_model(model: ElementModel) -> Element:
    space, basis = _metadata(model.space, model.basis)
    terms = {}
    for term in model.terms:
        key = key_from_json(term.key, space)
        terms[key] = terms.get(key, 0) + parse_scalar(term.coeff)
    q = None if model.q is None else parse_scalar(model.q)
    return Element(space, basis, terms, q)


def tensor_from_model(model: TensorModel) -> Tensor:
    space, basis = _metadata(model.space, model.basis)
    terms = {}
    for term in model.terms:
        keys = tuple(key_from_json(k, space) for k in term.keys)
        terms[keys] = terms.get(keys, 0) + parse_scalar(term.coeff)
    q = None if model.q is None else parse_scalar(model.q)
    return Tensor(space, basis, terms, q, model.arity)


def dump(model: BaseModel) -> str:
    """Compact deterministic JSON."""
    return model.model_dump_json(exclude_none=True)


def dump_element(x: Element) -> str:
    return dump(element_to_model(x))


def dump_tensor(t: Tensor) -> str:
    return dump(tensor_to_model(t))


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInputError(f"Input is not valid JSON or diagram text: {e}") from e


def _validate(model_type, value: Any):
    try:
        return model_type.model_validate(value)
    except ValidationError as e:
        raise MalformedInputError(f"Invalid {model_type.__name__}: {e}") from e


def read_text(argument: str) -> str:
    """Return the contents of a file path, or the argument itself when it is inline text."""
    path = Path(argument)
    try:
        if path.is_file():
            logger.debug(f"Reading input from {path}")
            return path.read_text(encoding="utf-8")
    except OSError:
        pass
    return argument


def load_document(text: str) -> Document:
    """
    Parse any supported input document.

    Returns:
        A Diagram for diagram text or JSON, a composition tuple for a flat
        integer array, an Element or a Tensor for their JSON forms
    """
    value = _loads(text)
    if isinstance(value, dict):
        if "terms" in value:
            if any("keys" in t for t in value.get("terms", []) if isinstance(t, dict)) or "arity" in value:
                return tensor_from_model(_validate(TensorModel, value))
            return element_from_model(_validate(ElementModel, value))
        return diagram_from_model(_validate(DiagramModel, value))
    if isinstance(value, list):
        if all(isinstance(v, list) for v in value) and value:
            return diagram_from_blocks(value)
        if all(isinstance(v, int) and not isinstance(v, bool) for v in value):
            return make_composition(value)
    raise MalformedInputError(f"Unrecognised input document: {text[:80]!r}")


def as_element(document: Document, space: Space, basis: Basis, q: Optional[str] = None) -> Element:
    """Promote a bare key to a basis element, or check an Element's metadata."""
    if isinstance(document, Element):
        return document
    if isinstance(document, Tensor):
        raise MalformedInputError("Expected an element, got a tensor")
    if isinstance(document, tuple) and space in DIAGRAM_SPACES:
        if document:
            raise MalformedInputError(f"{space.value} keys are diagrams, got composition {document}")
        document = canonicalize(0, [])
    if isinstance(document, Diagram) and space not in DIAGRAM_SPACES:
        if not document.is_empty:
            raise MalformedInputError(f"{space.value} keys are compositions, got a diagram")
        document = ()
    return Element.basis_element(space, basis, document, None if q is None else parse_scalar(q))
