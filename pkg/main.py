"""
ParQSym - exact computation in the Hopf algebras of partition diagrams

Command-line entry point.
Verbs: enum, op, convert, pair, map, check, render.
"""

import argparse
import logging
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Union

from config import settings
from models.schemas import ClassifiedDiagramModel, EnumerationSummary
from services.algebra import (
    LEGAL_BASES,
    Basis,
    Element,
    Space,
    Tensor,
    format_scalar,
    parse_scalar,
    takeuchi_antipode,
)
from services.checks import SUITE_NAMES, run_suite
from services.classical import handle_for
from services.codec import (
    Document,
    as_element,
    diagram_to_model,
    dump,
    dump_element,
    dump_tensor,
    load_document,
    parse_diagram,
    read_text,
)
from services.diagram import PREDICATES, classify, enumerate_diagrams, render_ascii
from services.errors import InvariantViolation, MalformedInputError, MetadataMismatchError
from services.morphisms import MAPS, pair
from services.parqsym import parqsym
from services.parsym import parsym

# Configure logging
logging.basicConfig(
    level=getattr(logging, settings.log_level.upper(), logging.WARNING),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_MALFORMED = 2
EXIT_INVARIANT = 3

OPERATIONS = ("mul", "comul", "antipode", "counit")

Result = Union[Element, Tensor, Fraction]


def _space(value: str) -> Space:
    try:
        return Space(value)
    except ValueError:
        raise MalformedInputError(f"Unknown space {value!r}") from None


def _basis(value: str) -> Basis:
    try:
        return Basis(value)
    except ValueError:
        raise MalformedInputError(f"Unknown basis {value!r}") from None


def _space_of_basis(basis: Basis) -> Space:
    for space in (Space.PARSYM, Space.PARQSYM):
        if basis in LEGAL_BASES[space]:
            return space
    raise MalformedInputError(f"Basis {basis.value} does not belong to ParSym or ParQSym")


def _load(argument: str) -> Document:
    return load_document(read_text(argument))


def _element(argument: str, space: Space, basis: Basis, q: Optional[str]) -> Element:
    """Load an element, promoting bare keys and checking metadata against the options."""
    x = as_element(_load(argument), space, basis, q)
    wanted = Element(space, basis, {}, x.q if q is None else parse_scalar(q))
    if (x.space, x.basis) != (wanted.space, wanted.basis):
        raise MetadataMismatchError(f"Input is {x.describe()}, options ask for {wanted.describe()}")
    if q is not None and x.q != wanted.q:
        raise MetadataMismatchError(f"Input has q = {x.q}, options ask for q = {wanted.q}")
    return x


def _check_order(order: int, allow_large: bool) -> None:
    if order < 0:
        raise MalformedInputError(f"Order must be non-negative, got {order}")
    if order > settings.enum_order_limit and not allow_large:
        raise MalformedInputError(
            f"Order {order} exceeds {settings.enum_order_limit}; pass --allow-large to enumerate it"
        )


def _emit(result: Result, out: TextIO) -> None:
    if isinstance(result, Element):
        out.write(dump_element(result) + "\n")
    elif isinstance(result, Tensor):
        out.write(dump_tensor(result) + "\n")
    elif isinstance(result, Fraction):
        out.write(format_scalar(result) + "\n")
    else:
        out.write(f"{result}\n")


def cmd_enum(args: argparse.Namespace, out: TextIO) -> int:
    """All diagrams of one order as JSON lines, then a count line."""
    _check_order(args.order, args.allow_large)
    test = PREDICATES[args.predicate] if args.predicate else None
    count = 0
    for d in enumerate_diagrams(args.order):
        if test is not None and not test(d):
            continue
        if args.classify:
            model = ClassifiedDiagramModel(**diagram_to_model(d).model_dump(), classification=classify(d))
        else:
            model = diagram_to_model(d)
        out.write(dump(model) + "\n")
        count += 1
    out.write(dump(EnumerationSummary(count=count)) + "\n")
    logger.info(f"Enumerated {count} diagrams of order {args.order}")
    return EXIT_OK


def _apply(operation: str, space: Space, elements: List[Element], args: argparse.Namespace) -> Result:
    x = elements[0]
    if space is Space.PARSYM:
        return {
            "mul": lambda: parsym.product(x, elements[1], fast=not args.oracle),
            "comul": lambda: parsym.coproduct(x),
            "antipode": lambda: parsym.antipode(x),
            "counit": lambda: parsym.counit(x),
        }[operation]()
    if space is Space.PARQSYM:
        return {
            "mul": lambda: parqsym.product(x, elements[1], fast=not args.oracle),
            "comul": lambda: parqsym.coproduct(x, fast=not args.oracle),
            "antipode": lambda: parqsym.antipode(x, method=args.method, inverse=args.inverse),
            "counit": lambda: parqsym.counit(x),
        }[operation]()
    handle = handle_for(space)
    return {
        "mul": lambda: handle.element(handle.product(x.terms, elements[1].terms)),
        "comul": lambda: handle.tensor(handle.coproduct(x.terms)),
        "antipode": lambda: takeuchi_antipode(handle, x),
        "counit": lambda: handle.counit(x.terms),
    }[operation]()


def cmd_op(args: argparse.Namespace, out: TextIO) -> int:
    """Product, coproduct, antipode or counit in a chosen space and basis."""
    space, basis = _space(args.space), _basis(args.basis)
    arity = 2 if args.operation == "mul" else 1
    if len(args.inputs) != arity:
        raise MalformedInputError(f"{args.operation} takes {arity} input(s), got {len(args.inputs)}")
    elements = [_element(a, space, basis, args.q) for a in args.inputs]
    _emit(_apply(args.operation, space, elements, args), out)
    return EXIT_OK


def cmd_convert(args: argparse.Namespace, out: TextIO) -> int:
    """Re-express an element in another basis of the same space."""
    source, target = _basis(args.source), _basis(args.target)
    space = _space_of_basis(source)
    if _space_of_basis(target) is not space:
        raise MalformedInputError(f"Cannot convert between {source.value} and {target.value}")
    source_q = args.q if source in (Basis.KQ, Basis.ETAQ) else None
    x = _element(args.input, space, source, source_q)
    target_q = args.q if target in (Basis.KQ, Basis.ETAQ) else None
    if space is Space.PARSYM:
        _emit(parsym.convert(x, target, target_q), out)
    else:
        _emit(parqsym.convert(x, target, target_q), out)
    return EXIT_OK


def _pair_side(argument: str, diagram_space: Space, basis: Basis, composition_space: Space, q: Optional[str]) -> Element:
    document = _load(argument)
    if isinstance(document, Element):
        return document
    if isinstance(document, tuple):
        return as_element(document, composition_space, Basis.NATURAL)
    return as_element(document, diagram_space, basis, q if basis in (Basis.KQ, Basis.ETAQ) else None)


def cmd_pair(args: argparse.Namespace, out: TextIO) -> int:
    """⟨left, right⟩ for ParQSym × ParSym or QSym × NSym."""
    left = _pair_side(args.left, Space.PARQSYM, _basis(args.left_basis), Space.QSYM, args.q)
    right = _pair_side(args.right, Space.PARSYM, _basis(args.right_basis), Space.NSYM, args.q)
    _emit(pair(left, right), out)
    return EXIT_OK


def cmd_map(args: argparse.Namespace, out: TextIO) -> int:
    """Apply Ψ_PQ, Φ or Φ_PS."""
    document = _load(args.input)
    if args.name == "phi":
        x = as_element(document, Space.NSYM, Basis.NATURAL)
    else:
        x = as_element(document, Space.PARQSYM, Basis.M)
    _emit(MAPS[args.name](x), out)
    return EXIT_OK


def _q_list(values: Optional[Sequence[str]]) -> Optional[List[str]]:
    if values is None:
        return None
    return [part for value in values for part in value.split(",") if part.strip()]


def cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    """Run a verification suite and print its report."""
    max_order = settings.default_max_order if args.max_order is None else args.max_order
    _check_order(max_order, args.allow_large)
    report = run_suite(
        args.suite,
        max_order=max_order,
        q_values=_q_list(args.q),
        sample_size=args.sample_size,
        seed=args.seed,
    )
    out.write(dump(report) + "\n")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_render(args: argparse.Namespace, out: TextIO) -> int:
    """Two-row picture of a diagram."""
    out.write(render_ascii(parse_diagram(read_text(args.input))) + "\n")
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, TextIO], int]] = {
    "enum": cmd_enum,
    "op": cmd_op,
    "convert": cmd_convert,
    "pair": cmd_pair,
    "map": cmd_map,
    "check": cmd_check,
    "render": cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parqsym",
        description="Exact computation in ParSym, ParQSym and their classical quotients.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress to stderr")
    verbs = parser.add_subparsers(dest="verb", required=True)

    enum = verbs.add_parser("enum", help="Enumerate the diagrams of one order")
    enum.add_argument("--order", type=int, required=True)
    enum.add_argument("--predicate", choices=sorted(PREDICATES))
    enum.add_argument("--allow-large", action="store_true")
    enum.add_argument("--classify", action="store_true", help="Attach predicate values to every diagram")

    op = verbs.add_parser("op", help="Apply a structure map")
    op.add_argument("operation", choices=OPERATIONS)
    op.add_argument("--space", required=True, choices=[s.value for s in Space])
    op.add_argument("--basis", required=True, choices=[b.value for b in Basis])
    op.add_argument("--q")
    op.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="INPUT")
    op.add_argument("--method", choices=("takeuchi", "explicit"), default="takeuchi")
    op.add_argument("--inverse", action="store_true", help="Inverse antipode (ParQSym)")
    op.add_argument("--oracle", action="store_true", help="Compute through the anchor basis")

    convert = verbs.add_parser("convert", help="Change basis")
    convert.add_argument("--from", dest="source", required=True, choices=[b.value for b in Basis])
    convert.add_argument("--to", dest="target", required=True, choices=[b.value for b in Basis])
    convert.add_argument("--q")
    convert.add_argument("--in", dest="input", required=True, metavar="INPUT")

    pairing = verbs.add_parser("pair", help="Evaluate the duality pairing")
    pairing.add_argument("--left", required=True)
    pairing.add_argument("--right", required=True)
    pairing.add_argument("--left-basis", default=Basis.M.value)
    pairing.add_argument("--right-basis", default=Basis.H.value)
    pairing.add_argument("--q")

    mapping = verbs.add_parser("map", help="Apply a morphism")
    mapping.add_argument("--name", required=True, choices=sorted(MAPS))
    mapping.add_argument("--in", dest="input", required=True, metavar="INPUT")

    check = verbs.add_parser("check", help="Run a verification suite")
    check.add_argument("--suite", required=True, choices=SUITE_NAMES)
    check.add_argument("--max-order", type=int)
    check.add_argument("--q", nargs="+", help="q values, space or comma separated")
    check.add_argument("--sample-size", type=int)
    check.add_argument("--seed", type=int)
    check.add_argument("--allow-large", action="store_true")

    render = verbs.add_parser("render", help="Draw a diagram")
    render.add_argument("--in", dest="input", required=True, metavar="INPUT")
    return parser


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    Parse argv, run one verb and return the process exit code.

    Returns:
        0 on success, 1 when a check suite fails, 2 on malformed input,
        3 on an invariant violation such as q = -1
    """
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_MALFORMED

    if args.verbose:
        logging.getLogger().setLevel(logging.INFO)

    try:
        return COMMANDS[args.verb](args, out)
    except InvariantViolation as e:
        logger.error(f"Invariant violation: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INVARIANT
    except MalformedInputError as e:
        logger.error(f"Malformed input: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(run())
