"""Named verification suites over truncations of ParSym, ParQSym and the classical algebras."""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from config import settings
from models.schemas import CheckReport
from services.algebra import (
    Basis,
    BialgebraHandle,
    Element,
    Key,
    ScalarLike,
    Space,
    Tensor,
    Terms,
    accumulate,
    convolve_identity,
    convolve_identity_right,
    format_scalar,
    make_q,
    map_tensor,
    takeuchi_terms,
)
from services.checks.report import ReportBuilder, fmt_key, fmt_keys
from services.checks.structure import (
    BAR,
    DOT,
    GRADING_EXPECTATIONS,
    PRODUCT_CLOSURE_PREDICATES,
    filtration_report,
    check_coproduct_closure,
    check_product_closure,
    grading_report,
    pairs_up_to,
    verify_strict_grading,
)
from services.classical import (
    eta_char,
    nsym,
    nsym_comul,
    nsym_eta_star,
    nsym_mul,
    qsym,
    qsym_comul,
    qsym_mul,
    shuffle_algebra,
    xi_s,
    zeta_qsym,
)
from services.diagram import (
    PREDICATES,
    Diagram,
    alpha_of,
    bullet,
    diagrams_up_to,
    enumerate_diagrams,
    length,
    pi_of_composition,
    tensor,
)
from services.errors import MalformedInputError
from services.morphisms import eta_parqsym, pair, phi, phi_ps, phi_tensor, psi_pq, psi_pq_tensor
from services.parqsym import (
    WeightFunction,
    antipode_inverse_M_explicit,
    antipode_M_explicit,
    comul_M,
    deconcat_basis_pair,
    eta_q_to_l,
    eta_q_to_m,
    l_to_eta_q,
    l_to_m,
    m_handle,
    m_to_eta_q,
    m_to_l,
    mul_M,
    mul_M_by_quasi_shuffle,
    parqsym,
    zeta,
)
from services.parsym import (
    comul_H,
    comul_kappa_line,
    h_handle,
    h_to_kappa,
    h_to_r,
    kappa_line_diagram,
    kappa_to_h,
    kappa_to_r,
    parsym,
    r_to_h,
    r_to_kappa,
)
from services.words import compositions

logger = logging.getLogger(__name__)


def _m(d: Diagram) -> Element:
    return Element.basis_element(Space.PARQSYM, Basis.M, d)


def _l(d: Diagram) -> Element:
    return Element.basis_element(Space.PARQSYM, Basis.L, d)


def _eta(d: Diagram, q: Fraction) -> Element:
    return Element.basis_element(Space.PARQSYM, Basis.ETAQ, d, q)


def _h(d: Diagram) -> Element:
    return Element.basis_element(Space.PARSYM, Basis.H, d)


def _r(d: Diagram) -> Element:
    return Element.basis_element(Space.PARSYM, Basis.R, d)


def _kappa(d: Diagram, q: Fraction) -> Element:
    return Element.basis_element(Space.PARSYM, Basis.KQ, d, q)


def _order_pairs(total: int) -> Iterator[Tuple[Diagram, Diagram]]:
    for i in range(total + 1):
        for a in enumerate_diagrams(i):
            for b in enumerate_diagrams(total - i):
                yield a, b


def _composition_pairs(max_size: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    for total in range(max_size + 1):
        for i in range(total + 1):
            for a in compositions(i):
                for b in compositions(total - i):
                    yield a, b


@dataclass
class SuiteContext:
    """Parameters shared by every suite of one run."""

    max_order: int
    q_values: List[Fraction]
    sample_size: int
    seed: int
    exhaustive_order: int

    def builder(self, suite: str) -> ReportBuilder:
        return ReportBuilder(
            suite,
            self.max_order,
            [format_scalar(q) for q in self.q_values],
            self.sample_size,
            self.seed,
        )

    @property
    def exhaustive(self) -> int:
        return min(self.exhaustive_order, self.max_order)

    @property
    def sampled_order(self) -> Optional[int]:
        """Order of the random cases, or None when the truncation is checked exhaustively."""
        if self.max_order > self.exhaustive and self.sample_size:
            return self.max_order
        return None

    def rng(self) -> random.Random:
        # a fresh generator per suite keeps "all" identical to the single suites
        return random.Random(self.seed)


@dataclass(frozen=True)
class AxiomTarget:
    """A bialgebra handle together with its basis keys by degree."""

    handle: BialgebraHandle
    label: str
    keys_of: Callable[[int], List[Key]]


DIAGRAM_TARGETS = (
    AxiomTarget(m_handle, "M", enumerate_diagrams),
    AxiomTarget(h_handle, "H", enumerate_diagrams),
)

COMPOSITION_TARGETS = (
    AxiomTarget(qsym, "QSym:M", compositions),
    AxiomTarget(nsym, "NSym:H", compositions),
    AxiomTarget(shuffle_algebra, "Sh:x", compositions),
)


class _Antipode:
    """Takeuchi antipode on raw terms, memoised per basis key."""

    def __init__(self, handle: BialgebraHandle):
        self.handle = handle
        self.cache: Dict[Key, Terms] = {}

    def __call__(self, terms: Terms) -> Terms:
        result: Terms = {}
        for key, c in terms.items():
            image = self.cache.get(key)
            if image is None:
                image = self.cache[key] = takeuchi_terms(self.handle, {key: Fraction(1)})
            for target, ct in image.items():
                accumulate(result, target, c * ct)
        return result


def _check_coassociativity(report: ReportBuilder, target: AxiomTarget, key: Key) -> None:
    h = target.handle
    left: Dict[Tuple, Fraction] = {}
    right: Dict[Tuple, Fraction] = {}
    for (a, b), c in h.coproduct_key(key).items():
        for (x, y), cx in h.coproduct_key(a).items():
            accumulate(left, (x, y, b), c * cx)
        for (x, y), cy in h.coproduct_key(b).items():
            accumulate(right, (a, x, y), c * cy)
    report.expect(left == right, [fmt_key(target.label, key)], "(Δ⊗id)Δ = (id⊗Δ)Δ", "coassociativity")


def _check_key_axioms(report: ReportBuilder, target: AxiomTarget, key: Key, antipode: _Antipode) -> None:
    h = target.handle
    inputs = [fmt_key(target.label, key)]
    delta = h.coproduct_key(key)
    _check_coassociativity(report, target, key)

    unit_left: Terms = {}
    unit_right: Terms = {}
    for (a, b), c in delta.items():
        accumulate(unit_left, b, c * h.counit_key(a))
        accumulate(unit_right, a, c * h.counit_key(b))
    own = {key: Fraction(1)}
    report.expect(unit_left == own and unit_right == own, inputs, "(ε⊗id)Δ = id = (id⊗ε)Δ", "counit")

    expected: Terms = {}
    accumulate(expected, h.unit, h.counit_key(key))
    report.expect(convolve_identity(h, own, antipode) == expected, inputs, "m(S⊗id)Δ = uε", "left antipode")
    report.expect(convolve_identity_right(h, own, antipode) == expected, inputs, "m(id⊗S)Δ = uε", "right antipode")


def _check_pair_axioms(report: ReportBuilder, target: AxiomTarget, a: Key, b: Key) -> None:
    h = target.handle
    inputs = [fmt_key(target.label, a), fmt_key(target.label, b)]
    product = h.product_keys(a, b)
    lhs = h.coproduct(product)
    rhs = h.tensor_product(h.coproduct_key(a), h.coproduct_key(b))
    report.expect(lhs == rhs, inputs, "Δ(ab) = Δ(a)Δ(b)", "bialgebra compatibility")
    report.expect(
        h.counit(product) == h.counit_key(a) * h.counit_key(b), inputs, "ε(ab) = ε(a)ε(b)", "counit multiplicative"
    )


def _check_associativity(report: ReportBuilder, target: AxiomTarget, a: Key, b: Key, c: Key) -> None:
    h = target.handle
    lhs = h.product(h.product_keys(a, b), {c: Fraction(1)})
    rhs = h.product({a: Fraction(1)}, h.product_keys(b, c))
    report.expect(
        lhs == rhs,
        [fmt_key(target.label, k) for k in (a, b, c)],
        "(ab)c = a(bc)",
        "associativity",
    )


def _exhaustive_axioms(report: ReportBuilder, target: AxiomTarget, max_degree: int) -> None:
    antipode = _Antipode(target.handle)
    for degree in range(max_degree + 1):
        for key in target.keys_of(degree):
            _check_key_axioms(report, target, key, antipode)
    for total in range(max_degree + 1):
        for i in range(total + 1):
            for a in target.keys_of(i):
                for b in target.keys_of(total - i):
                    _check_pair_axioms(report, target, a, b)


def _compatibility(report: ReportBuilder, target: AxiomTarget, low: int, high: int) -> None:
    """Coassociativity and Δ(ab) = Δ(a)Δ(b) for every key and pair of total degree low..high."""
    for degree in range(low, high + 1):
        for key in target.keys_of(degree):
            _check_coassociativity(report, target, key)
        for i in range(degree + 1):
            for a in target.keys_of(i):
                for b in target.keys_of(degree - i):
                    _check_pair_axioms(report, target, a, b)


def _associativity(report: ReportBuilder, target: AxiomTarget, max_degree: int) -> None:
    for total in range(max_degree + 1):
        for i in range(total + 1):
            for a in target.keys_of(i):
                for b in target.keys_of(total - i):
                    for j in range(max_degree - total + 1):
                        for c in target.keys_of(j):
                            _check_associativity(report, target, a, b, c)


def hopf_suite(ctx: SuiteContext) -> CheckReport:
    """Bialgebra and antipode axioms for the M and H anchors and the classical algebras."""
    report = ctx.builder("hopf")
    for target in DIAGRAM_TARGETS:
        _exhaustive_axioms(report, target, ctx.exhaustive)
        _compatibility(report, target, ctx.exhaustive + 1, ctx.max_order)
        _associativity(report, target, ctx.max_order)
        order = ctx.sampled_order
        if order is None:
            continue
        rng = ctx.rng()
        antipode = _Antipode(target.handle)
        keys = enumerate_diagrams(order)
        for _ in range(ctx.sample_size):
            _check_key_axioms(report, target, rng.choice(keys), antipode)
            i = rng.randint(1, order - 1) if order > 1 else 0
            a = rng.choice(enumerate_diagrams(i))
            b = rng.choice(enumerate_diagrams(order - i))
            _check_pair_axioms(report, target, a, b)
        report.note(f"{target.label}: {ctx.sample_size} sampled cases at order {order}")
    for target in COMPOSITION_TARGETS:
        _exhaustive_axioms(report, target, ctx.max_order + 1)
        _associativity(report, target, ctx.max_order + 1)
    return report.build()


def duality_suite(ctx: SuiteContext) -> CheckReport:
    """⟨M, H⟩ = δ makes ⋆ dual to ΔH and ΔM dual to ⊗; L/R and η^(q)/κ^(q) are dual bases."""
    report = ctx.builder("duality")
    for total in range(ctx.max_order + 1):
        dual_of: Dict[Tuple[Diagram, Diagram], Terms] = {}
        for c in enumerate_diagrams(total):
            for split, coeff in h_handle.coproduct_key(c).items():
                dual_of.setdefault(split, {})[c] = coeff
        for a, b in _order_pairs(total):
            inputs = [fmt_key("M", a), fmt_key("M", b)]
            report.expect(
                m_handle.product_keys(a, b) == dual_of.get((a, b), {}),
                inputs,
                "⟨M_a ⋆ M_b, H_c⟩ = ⟨M_a ⊗ M_b, ΔH_c⟩",
                "product not dual to the H coproduct",
            )
            report.expect(
                m_handle.coproduct_key(tensor(a, b)).get((a, b)) == 1,
                inputs,
                "⟨ΔM_x, H_a ⊗ H_b⟩ = ⟨M_x, H_a H_b⟩",
                "coproduct misses the ⊗ of the pair",
            )
        for x in enumerate_diagrams(total):
            for (a, b), coeff in m_handle.coproduct_key(x).items():
                report.expect(
                    coeff == 1 and tensor(a, b) == x,
                    [fmt_key("M", x)],
                    fmt_keys("M", (a, b)),
                    "coproduct term not dual to the H product",
                )

    for total in range(ctx.max_order + 2):
        nsym_dual: Dict[Tuple, Terms] = {}
        for gamma in compositions(total):
            for split, coeff in nsym.coproduct_key(gamma).items():
                nsym_dual.setdefault(split, {})[gamma] = coeff
        for i in range(total + 1):
            for alpha in compositions(i):
                for beta in compositions(total - i):
                    report.expect(
                        qsym.product_keys(alpha, beta) == nsym_dual.get((alpha, beta), {}),
                        [fmt_key("QSym:M", alpha), fmt_key("QSym:M", beta)],
                        "⟨M_α M_β, H_γ⟩ = ⟨M_α ⊗ M_β, ΔH_γ⟩",
                        "NSym coproduct not adjoint to the quasi-shuffle",
                    )

    for order in range(ctx.max_order + 1):
        keys = enumerate_diagrams(order)
        l_side = [parqsym.convert(_l(d), Basis.M) for d in keys]
        r_side = [parsym.convert(_r(d), Basis.H) for d in keys]
        _check_dual_bases(report, keys, l_side, r_side, "L", "R")
        for q in ctx.q_values:
            eta_side = [parqsym.convert(_eta(d, q), Basis.M) for d in keys]
            kappa_side = [parsym.convert(_kappa(d, q), Basis.H) for d in keys]
            _check_dual_bases(report, keys, eta_side, kappa_side, f"η^({q})", f"κ^({q})")
    return report.build()


def _check_dual_bases(
    report: ReportBuilder,
    keys: Sequence[Diagram],
    left: Sequence[Element],
    right: Sequence[Element],
    left_label: str,
    right_label: str,
) -> None:
    for rho, x in zip(keys, left):
        for pi, y in zip(keys, right):
            value = pair(x, y)
            report.expect(
                value == (1 if rho == pi else 0),
                [fmt_key(left_label, rho), fmt_key(right_label, pi)],
                f"pairing {value}",
                "dual bases",
            )


def _check_round_trips(report: ReportBuilder, d: Diagram, q_values: Sequence[Fraction]) -> None:
    inputs = [str(d)]
    m, l, h, r = _m(d), _l(d), _h(d), _r(d)
    report.expect(l_to_m(m_to_l(m)) == m, inputs, "M → L → M")
    report.expect(m_to_l(l_to_m(l)) == l, inputs, "L → M → L")
    report.expect(r_to_h(h_to_r(h)) == h, inputs, "H → R → H")
    report.expect(h_to_r(r_to_h(r)) == r, inputs, "R → H → R")
    report.expect(parqsym.convert(m, Basis.ETA) == m_to_eta_q(m, 1), inputs, "M → η is M → η^(1)")
    for q in q_values:
        e, k = _eta(d, q), _kappa(d, q)
        tag = f" at q={q}"
        report.expect(eta_q_to_m(m_to_eta_q(m, q)) == m, inputs, "M → η^(q) → M" + tag)
        report.expect(m_to_eta_q(eta_q_to_m(e), q) == e, inputs, "η^(q) → M → η^(q)" + tag)
        report.expect(eta_q_to_l(l_to_eta_q(l, q)) == l, inputs, "L → η^(q) → L" + tag)
        report.expect(l_to_eta_q(eta_q_to_l(e), q) == e, inputs, "η^(q) → L → η^(q)" + tag)
        report.expect(l_to_eta_q(l, q) == m_to_eta_q(l_to_m(l), q), inputs, "L → η^(q) direct vs via M" + tag)
        report.expect(eta_q_to_l(e) == m_to_l(eta_q_to_m(e)), inputs, "η^(q) → L direct vs via M" + tag)
        report.expect(kappa_to_h(h_to_kappa(h, q)) == h, inputs, "H → κ^(q) → H" + tag)
        report.expect(h_to_kappa(kappa_to_h(k), q) == k, inputs, "κ^(q) → H → κ^(q)" + tag)
        report.expect(kappa_to_r(r_to_kappa(r, q)) == r, inputs, "R → κ^(q) → R" + tag)
        report.expect(r_to_kappa(kappa_to_r(k), q) == k, inputs, "κ^(q) → R → κ^(q)" + tag)
        report.expect(r_to_kappa(r, q) == h_to_kappa(r_to_h(r), q), inputs, "R → κ^(q) direct vs via H" + tag)
        report.expect(kappa_to_r(k) == h_to_r(kappa_to_h(k)), inputs, "κ^(q) → R direct vs via H" + tag)


def _check_fast_products(report: ReportBuilder, a: Diagram, b: Diagram, q_values: Sequence[Fraction]) -> None:
    inputs = [str(a), str(b)]
    report.expect(mul_M(a, b) == mul_M_by_quasi_shuffle(a, b), inputs, "M padded pairs vs quasi-shuffle")
    report.expect(
        parqsym.product(_l(a), _l(b)) == parqsym.product(_l(a), _l(b), fast=False), inputs, "L product vs M oracle"
    )
    report.expect(
        parsym.product(_r(a), _r(b)) == parsym.product(_r(a), _r(b), fast=False), inputs, "R product vs H oracle"
    )
    for q in q_values:
        tag = f" at q={q}"
        x, y = _eta(a, q), _eta(b, q)
        report.expect(parqsym.product(x, y) == parqsym.product(x, y, fast=False), inputs, "η^(q) product vs M oracle" + tag)
        u, v = _kappa(a, q), _kappa(b, q)
        report.expect(parsym.product(u, v) == parsym.product(u, v, fast=False), inputs, "κ^(q) product vs H oracle" + tag)


def _check_r_recursion(report: ReportBuilder, a: Diagram, b: Diagram) -> None:
    """R_{π⊗σ} = R_π R_σ − R_{π•σ} and the matching coproduct recursion, computed in H."""
    inputs = [fmt_key("R", a), fmt_key("R", b)]
    r_a, r_b = parsym.to_h(_r(a)), parsym.to_h(_r(b))
    r_bullet = parsym.to_h(_r(bullet(a, b)))
    r_tensor = parsym.to_h(_r(tensor(a, b)))

    rhs = h_handle.product(r_a, r_b)
    for key, c in r_bullet.items():
        accumulate(rhs, key, -c)
    report.expect(r_tensor == rhs, inputs, "R_{π⊗σ} = R_π R_σ − R_{π•σ}")

    delta = h_handle.tensor_product(h_handle.coproduct(r_a), h_handle.coproduct(r_b))
    for keys, c in h_handle.coproduct(r_bullet).items():
        accumulate(delta, keys, -c)
    report.expect(h_handle.coproduct(r_tensor) == delta, inputs, "ΔR_{π⊗σ} = ΔR_π ΔR_σ − ΔR_{π•σ}")


def _check_deconcat_basis(report: ReportBuilder, weight: WeightFunction, max_order: int, eta_q: Optional[Fraction]) -> None:
    basis = deconcat_basis_pair(weight, max_order)
    for d in diagrams_up_to(max_order):
        inputs = [f"Q[{weight.name}]{d}"]
        unit = {d: Fraction(1)}
        report.expect(basis.from_m(basis.to_m(unit)) == unit, inputs, "Q → M → Q")
        expanded = map_tensor(m_handle.coproduct_key(d), basis.forward.__getitem__)
        report.expect(
            m_handle.coproduct(basis.to_m(unit)) == expanded, inputs, "ΔQ deconcatenates", "not a deconcatenation basis"
        )
        if eta_q is not None:
            report.expect(
                basis.to_m(unit) == parqsym.to_m(_eta(d, eta_q)),
                inputs,
                f"constant weight {weight.name} gives η^({eta_q})",
            )


def bases_suite(ctx: SuiteContext) -> CheckReport:
    """Conversions, product and coproduct formulas and the explicit antipode against their anchors."""
    report = ctx.builder("bases")
    n = ctx.max_order
    for d in diagrams_up_to(n):
        _check_round_trips(report, d, ctx.q_values)
        report.expect(
            parqsym.coproduct(_l(d)) == parqsym.coproduct(_l(d), fast=False), [str(d)], "ΔL split vs M oracle"
        )
        for q in ctx.q_values:
            expected = Tensor(Space.PARQSYM, Basis.ETAQ, m_handle.coproduct_key(d), q)
            report.expect(parqsym.coproduct(_eta(d, q)) == expected, [str(d)], f"Δη^({q}) deconcatenates")
        if not d.is_empty:
            report.expect(
                (not m_handle.reduced_coproduct_key(d)) == (length(d) == 1),
                [fmt_key("M", d)],
                "primitive iff ⊗-irreducible",
            )
        if length(d) == 1:
            report.expect(parsym.to_h(_r(d)) == {d: Fraction(1)}, [fmt_key("R", d)], "R_σ = H_σ for ⊗-irreducible σ")

    report.expect(zeta(_m(diagrams_up_to(0)[0])) == 1, ["M_∅"], "ζ(1) = 1")
    for a, b in pairs_up_to(n):
        _check_fast_products(report, a, b, ctx.q_values)
        report.expect(
            zeta(mul_M(a, b)) == zeta(_m(a)) * zeta(_m(b)), [fmt_key("M", a), fmt_key("M", b)], "ζ is a character"
        )
    for a in diagrams_up_to(min(n, 2)):
        for b in diagrams_up_to(min(n, 2)):
            if not a.is_empty and not b.is_empty:
                _check_r_recursion(report, a, b)

    for m in range(1, n + 2):
        line = kappa_line_diagram(m)
        for q in ctx.q_values:
            report.expect(
                comul_kappa_line(m, q) == parsym.coproduct(_kappa(line, q)),
                [fmt_key("κ", line)],
                f"closed form of Δκ^({q})",
            )

    for d in diagrams_up_to(ctx.exhaustive):
        inputs = [fmt_key("M", d)]
        m = _m(d)
        report.expect(antipode_M_explicit(d) == parqsym.antipode(m), inputs, "grid antipode vs Takeuchi")
        report.expect(
            antipode_inverse_M_explicit(d) == parqsym.antipode(m, inverse=True), inputs, "grid S̄ vs Takeuchi"
        )
        report.expect(parqsym.antipode(parqsym.antipode(m), inverse=True) == m, inputs, "S̄ ∘ S = id")
        report.expect(
            parqsym.antipode(m, method="explicit", inverse=True)
            == parqsym.antipode(m, method="takeuchi", inverse=True),
            inputs,
            "S̄ by both methods",
        )

    for q in ctx.q_values:
        _check_deconcat_basis(report, WeightFunction.constant(q + 1), n, q)
    _check_deconcat_basis(report, WeightFunction.constant(2), n, Fraction(1))
    _check_deconcat_basis(report, WeightFunction(lambda d: d.order + 1, name="order+1"), n, None)
    return report.build()


def morphisms_suite(ctx: SuiteContext) -> CheckReport:
    """Ψ_PQ, Φ and Φ_PS as Hopf maps, the characters they intertwine and the triangle identity."""
    report = ctx.builder("morphisms")
    n = ctx.max_order
    report.expect(eta_parqsym(_m(diagrams_up_to(0)[0])) == 0, ["M_∅"], "η_ParQSym(1) = 0")

    for a, b in pairs_up_to(n):
        inputs = [fmt_key("M", a), fmt_key("M", b)]
        product = mul_M(a, b)
        report.expect(psi_pq(product) == qsym_mul(alpha_of(a), alpha_of(b)), inputs, "Ψ_PQ multiplicative")
        image = shuffle_algebra.product(phi_ps(_m(a)).terms, phi_ps(_m(b)).terms)
        report.expect(phi_ps(product) == shuffle_algebra.element(image), inputs, "Φ_PS multiplicative")
        if not a.is_empty and not b.is_empty:
            report.expect(eta_parqsym(product) == 0, inputs, "η_ParQSym vanishes on products")

    for alpha, beta in _composition_pairs(n + 1):
        inputs = [fmt_key("QSym:M", alpha), fmt_key("QSym:M", beta)]
        x, y = qsym.element({alpha: Fraction(1)}), qsym.element({beta: Fraction(1)})
        expected = qsym.counit_key(alpha) * eta_char(y) + eta_char(x) * qsym.counit_key(beta)
        report.expect(eta_char(qsym_mul(alpha, beta)) == expected, inputs, "η is an infinitesimal character of QSym")
        u, v = shuffle_algebra.element({alpha: Fraction(1)}), shuffle_algebra.element({beta: Fraction(1)})
        expected = shuffle_algebra.counit_key(alpha) * xi_s(v) + xi_s(u) * shuffle_algebra.counit_key(beta)
        report.expect(
            xi_s(shuffle_algebra.element(shuffle_algebra.product_keys(alpha, beta))) == expected,
            [fmt_key("x", alpha), fmt_key("x", beta)],
            "ξ_s is an infinitesimal character of Sh",
        )

    for d in diagrams_up_to(n):
        inputs = [fmt_key("M", d)]
        m = _m(d)
        report.expect(psi_pq_tensor(comul_M(d)) == qsym_comul(alpha_of(d)), inputs, "Ψ_PQ comultiplicative")
        report.expect(zeta_qsym(psi_pq(m)) == zeta(m), inputs, "ζ_QSym ∘ Ψ_PQ = ζ")
        report.expect(eta_char(psi_pq(m)) == eta_parqsym(m), inputs, "η_ParQSym = η ∘ Ψ_PQ")
        image = phi_ps(m)
        report.expect(xi_s(image) == eta_parqsym(m), inputs, "ξ_s ∘ Φ_PS = η_ParQSym")
        report.expect(
            all(sum(beta) == d.order for beta in image.terms), inputs, "Φ_PS preserves degree"
        )
        mapped = map_tensor(comul_M(d).terms, lambda k: phi_ps(_m(k)).terms)
        report.expect(
            mapped == shuffle_algebra.coproduct(image.terms), inputs, "Φ_PS comultiplicative"
        )

    for alpha, beta in _composition_pairs(n):
        x, y = nsym.element({alpha: Fraction(1)}), nsym.element({beta: Fraction(1)})
        inputs = [fmt_key("H", alpha), fmt_key("H", beta)]
        report.expect(phi(nsym_mul(alpha, beta)) == parsym.product(phi(x), phi(y)), inputs, "Φ multiplicative")

    for size in range(n + 1):
        for alpha in compositions(size):
            inputs = [fmt_key("H", alpha)]
            target = pi_of_composition(alpha)
            report.expect(target.order == size, inputs, "Φ preserves degree")
            report.expect(phi_tensor(nsym_comul(alpha)) == comul_H(target), inputs, "Φ comultiplicative")
            image = phi(nsym.element({alpha: Fraction(1)}))
            for other in range(n + 1):
                for beta in compositions(other):
                    value = pair(_m(pi_of_composition(beta)), image)
                    report.expect(
                        value == (1 if alpha == beta else 0),
                        [fmt_key("M", pi_of_composition(beta)), fmt_key("Φ(H", alpha) + ")"],
                        f"pairing {value}",
                        "triangle identity",
                    )
            for q in ctx.q_values:
                lhs = phi(nsym_eta_star(alpha, q))
                rhs = h_handle.element(parsym.to_h(_kappa(target, q)))
                report.expect(lhs == rhs, inputs, f"Φ(η*^({q})) = κ^({q})")
    return report.build()


def subalgebras_suite(ctx: SuiteContext) -> CheckReport:
    """Closure of the predicate-spanned subspaces under coproduct and product."""
    report = ctx.builder("subalgebras")
    n = ctx.max_order
    for name in PREDICATES:
        report.absorb(check_coproduct_closure(Space.PARQSYM, name, n))
    for name in PRODUCT_CLOSURE_PREDICATES:
        report.absorb(check_product_closure(Space.PARQSYM, name, n))
        report.absorb(check_coproduct_closure(Space.PARSYM, name, n))
        report.absorb(check_product_closure(Space.PARSYM, name, n))

    if n >= 2:
        matching = check_product_closure(Space.PARQSYM, "matching", 2, expect_failures=True)
        failure = bullet(BAR, BAR)
        found = [c for c in matching.counterexamples if c.term == fmt_key("M", failure)]
        report.expect(bool(found), ["M", "matching"], fmt_key("M", failure), "matchings should not be closed under ⋆")
        for c in found:
            report.witness(c.inputs, c.term, "matching span is not a subalgebra")
    return report.build()


def gradings_suite(ctx: SuiteContext) -> CheckReport:
    """Which gradings are algebra and coalgebra gradings, and strict grading of ParQSym."""
    report = ctx.builder("gradings")
    n = ctx.max_order
    for (space, g), (algebra_graded, coalgebra_graded) in GRADING_EXPECTATIONS.items():
        sub = grading_report(space, g, n, expect_failures=not (algebra_graded and coalgebra_graded))
        tag = f"{space.value}/{g.value}"
        algebra_ok = not any(c.detail.startswith("algebra:") for c in sub.counterexamples)
        coalgebra_ok = not any(c.detail.startswith("coalgebra:") for c in sub.counterexamples)
        # failures only show up once two non-empty factors fit in the truncation
        expect_algebra = algebra_graded or n < 2
        expect_coalgebra = coalgebra_graded or n < 2
        report.expect(algebra_ok == expect_algebra, [tag], "graded algebra", f"observed {algebra_ok}")
        report.expect(coalgebra_ok == expect_coalgebra, [tag], "graded coalgebra", f"observed {coalgebra_ok}")
        for c in sub.counterexamples[:3]:
            report.witness([f"{tag}: {i}" for i in c.inputs], c.term, c.detail)

    if n >= 2:
        source = bullet(DOT, BAR)
        parsym_length = grading_report(Space.PARSYM, "length", n, expect_failures=True)
        term = fmt_keys("H", (DOT, BAR))
        report.expect(
            any(c.term == term and fmt_key("H", source) in c.inputs for c in parsym_length.counterexamples),
            [fmt_key("H", source)],
            term,
            "length grading counterexample for ΔH not reproduced",
        )
        parqsym_length = grading_report(Space.PARQSYM, "length", n, expect_failures=True)
        term = fmt_key("M", source)
        report.expect(
            any(c.term == term for c in parqsym_length.counterexamples),
            [fmt_key("M", DOT), fmt_key("M", BAR)],
            term,
            "length grading counterexample for ⋆ not reproduced",
        )

    report.absorb(verify_strict_grading(n))
    for name in PREDICATES:
        report.absorb(verify_strict_grading(n, name))
    return report.build()


def filtrations_suite(ctx: SuiteContext) -> CheckReport:
    report = ctx.builder("filtrations")
    report.absorb(filtration_report(ctx.max_order))
    return report.build()


SUITES: Dict[str, Callable[[SuiteContext], CheckReport]] = {
    "hopf": hopf_suite,
    "duality": duality_suite,
    "bases": bases_suite,
    "morphisms": morphisms_suite,
    "subalgebras": subalgebras_suite,
    "gradings": gradings_suite,
    "filtrations": filtrations_suite,
}

SUITE_NAMES = tuple(SUITES) + ("all",)


def run_suite(
    name: str,
    max_order: Optional[int] = None,
    q_values: Optional[Sequence[ScalarLike]] = None,
    sample_size: Optional[int] = None,
    seed: Optional[int] = None,
) -> CheckReport:
    """
    Run one verification suite, or all of them.

    Args:
        name: A name from SUITE_NAMES
        max_order: Truncation order (settings.default_max_order when omitted)
        q_values: q parameters for the q-dependent bases
        sample_size: Random cases above the exhaustive order
        seed: Seed for the random cases

    Returns:
        CheckReport whose status is fail iff a counterexample was found

    Raises:
        MalformedInputError: Unknown suite or negative order
        InvariantViolation: A q value of -1
    """
    if name not in SUITE_NAMES:
        raise MalformedInputError(f"Unknown suite {name!r}; expected one of {', '.join(SUITE_NAMES)}")
    max_order = settings.default_max_order if max_order is None else max_order
    if max_order < 0:
        raise MalformedInputError(f"max_order must be non-negative, got {max_order}")
    ctx = SuiteContext(
        max_order=max_order,
        q_values=[make_q(q) for q in (settings.q_values if q_values is None else q_values)],
        sample_size=settings.sample_size if sample_size is None else sample_size,
        seed=settings.random_seed if seed is None else seed,
        exhaustive_order=settings.exhaustive_order,
    )
    logger.info(f"Running suite {name} up to order {max_order} with q in {ctx.q_values}")

    if name != "all":
        return SUITES[name](ctx)
    report = ctx.builder("all")
    for suite in SUITES.values():
        report.absorb(suite(ctx))
    return report.build()
