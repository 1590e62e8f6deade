"""
Motivic Operation Calculus

Bidegree bookkeeping for P^a, P_V^a, Sq^a, Sq_V^a and β on H^{n,i}, the
P ↔ P_V conversion through powers of [ζ], evaluation of P⁰ and Q^a, and
the canonical form of a formal class expression Σ c·α·w(x) over a
coefficient model.

Usage:
    from cohops.services.motivic import MotivicClassExpr, normalize_motivic

    expr = MotivicClassExpr.of_word(model, Bidegree(2, 1), (P(1),), Mode.MOTIVIC)
    normalize_motivic(expr).format()     # 'x^3'

Educational Notes:
    - Words act on the right: the rightmost letter is applied to x first.
    - Power markers (w x)^e are opaque; products of distinct classes are
      never expanded.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from cohops.models.bidegree import Bidegree
from cohops.models.coefficient_model import (
    UNIT, CoefficientModel, CoeffMonomial, Element, format_monomial,
)
from cohops.services.steenrod import (
    BETA, P, PV, AdmissibleSeq, Letter, LetterKind, Mode, OpPoly, Sq, SqV, UnstableKind, Word,
    adem_reduce, format_word, split_trailing_frobenius, unstable_evaluate,
)
from cohops.utils.arith import PrimeContext
from cohops.utils.exceptions import ConversionZoneError, DomainError, ValidationError

logger = logging.getLogger(__name__)

TermKey = Tuple[CoeffMonomial, Word, int]


# ---------------------------------------------------------------------------
# Bidegree calculus
# ---------------------------------------------------------------------------

def bidegree_of(letter: Letter, source: Bidegree, ctx: PrimeContext) -> Bidegree:
    """Target bidegree of one letter applied to a class in bidegree source."""
    n, i = source.deg, source.weight
    ell = ctx.ell
    kind, a = letter.kind, letter.n
    if kind is LetterKind.BETA:
        return Bidegree(n + 1, i)
    if kind is LetterKind.P:
        return Bidegree(n + 2 * a * (ell - 1), i * ell)
    if kind is LetterKind.PV:
        return Bidegree(n + 2 * a * (ell - 1), i + a * (ell - 1))
    if kind is LetterKind.SQ:
        return Bidegree(n + a, 2 * i)
    # Sq_V^{2c} and Sq_V^{2c+1} both add c to the weight
    return Bidegree(n + a, i + a // 2)


def word_bidegree(word: Word, source: Bidegree, ctx: PrimeContext) -> Bidegree:
    target = source
    for letter in reversed(tuple(word)):
        target = bidegree_of(letter, target, ctx)
    return target


def pv_vanishes(a: int, source: Bidegree) -> bool:
    """P_V^a = 0 on H^{n,i} when i ≤ a and n < i + a; P_V^0 is the identity."""
    if a == 0:
        return False
    return source.weight <= a and source.deg < source.weight + a


# ---------------------------------------------------------------------------
# P ↔ P_V conversion
# ---------------------------------------------------------------------------

class Direction(str, Enum):
    P_TO_PV = 'P_to_PV'
    PV_TO_P = 'PV_to_P'


@dataclass(frozen=True)
class ConversionResult:
    """
    lhs(x) = [ζ]^{zeta_exponent} · operation(x) on a class in bidegree source.

    power_marker is set when n = 2a, where the right side is [ζ]^e x^ℓ.
    """
    direction: Direction
    a: int
    source: Bidegree
    zeta_exponent: int
    lhs: Letter
    operation: Letter
    power_marker: bool
    target: Bidegree

    @property
    def label(self) -> str:
        rhs = 'x^ℓ' if self.power_marker else f"{self.operation} x"
        zeta = f"[zeta]^{self.zeta_exponent} " if self.zeta_exponent else ''
        return f"{self.lhs} x = {zeta}{rhs}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.label,
            'source': self.source.as_list(),
            'target': self.target.as_list(),
            'data': {
                'direction': self.direction.value, 'a': self.a,
                'zeta_exponent': self.zeta_exponent,
                'operation': str(self.operation), 'power_marker': self.power_marker,
            },
        }


def convert(a: int, source: Bidegree, direction: Direction, ctx: PrimeContext) -> ConversionResult:
    """
    P^a = [ζ]^{(i−a)(ℓ−1)} P_V^a for a ≤ i, and P_V^a = [ζ]^{(a−i)(ℓ−1)} P^a
    for a ≥ i, on H^{n,i} with n ≥ 2i and n ≥ 2a. At ℓ = 2 the letters are
    Sq^{2a} and Sq_V^{2a}.

    Raises:
        ConversionZoneError: outside n ≥ 2i, n ≥ 2a, or the direction's range of a
        DomainError: d ≠ 1 ([ζ] is not defined over k)
    """
    direction = Direction(direction)
    n, i = source.deg, source.weight
    if a < 0:
        raise ValidationError(f"negative operation index {a}")
    if ctx.d != 1:
        raise DomainError(f"[ζ] requires d=1, got d={ctx.d}")
    if i < n < 2 * i:
        raise ConversionZoneError(f"conversion not established in the zone i<n<2i (source {source})")
    if n < 2 * i or n < 2 * a:
        raise ConversionZoneError(f"conversion requires n≥2i and n≥2a, got a={a} on {source}")
    if direction is Direction.P_TO_PV and a > i:
        raise ConversionZoneError(f"P→P_V conversion requires a≤i, got a={a}, i={i}")
    if direction is Direction.PV_TO_P and a < i:
        raise ConversionZoneError(f"P_V→P conversion requires a≥i, got a={a}, i={i}")

    if ctx.is_odd:
        p_letter, pv_letter = P(a), PV(a)
    else:
        p_letter, pv_letter = Sq(2 * a), SqV(2 * a)
    if direction is Direction.P_TO_PV:
        lhs, rhs, exponent = p_letter, pv_letter, (i - a) * (ctx.ell - 1)
    else:
        lhs, rhs, exponent = pv_letter, p_letter, (a - i) * (ctx.ell - 1)

    target = bidegree_of(lhs, source, ctx)
    if target != Bidegree(0, exponent) + bidegree_of(rhs, source, ctx):
        raise ConversionZoneError(f"conversion of {lhs} on {source} does not balance")
    return ConversionResult(direction, a, source, exponent, lhs, rhs, n == 2 * a, target)


# ---------------------------------------------------------------------------
# P⁰ and Q evaluation
# ---------------------------------------------------------------------------

def p0_exponent(weight: int, ctx: PrimeContext) -> int:
    return weight * (ctx.ell - 1) // ctx.d


def eval_p0(source: Bidegree, ctx: PrimeContext, model: CoefficientModel) -> CoeffMonomial:
    """
    P⁰ on H^{n,i} is multiplication by b^{i(ℓ−1)/d}, of bidegree (0, i(ℓ−1)).

    Raises:
        CoefficientModelError: the model has no b and i ≠ 0
    """
    return model.periodicity_power(p0_exponent(source.weight, ctx))


@dataclass
class MotivicClassExpr:
    """
    Σ c · α · (w x)^e for a formal class x in bidegree source.

    terms maps (coefficient monomial α, word w, power exponent e) to c ∈ F_ℓ.
    """
    model: CoefficientModel
    mode: Mode
    source: Bidegree
    terms: Dict[TermKey, int] = field(default_factory=dict)

    @property
    def ctx(self) -> PrimeContext:
        return self.model.ctx

    @classmethod
    def of_word(cls, model: CoefficientModel, source: Bidegree, word: Word,
                mode: Mode = Mode.MOTIVIC, coeff: CoeffMonomial = UNIT,
                scalar: int = 1) -> 'MotivicClassExpr':
        expr = cls(model, Mode(mode), source)
        expr.add(coeff, tuple(word), 1, scalar)
        return expr

    def add(self, coeff: CoeffMonomial, word: Word, power: int, scalar: int) -> None:
        key = (coeff, tuple(word), power)
        value = (self.terms.get(key, 0) + scalar) % self.ctx.ell
        if value:
            self.terms[key] = value
        else:
            self.terms.pop(key, None)

    def merge(self, other: 'MotivicClassExpr', scalar: int = 1) -> None:
        for (coeff, word, power), c in other.terms.items():
            self.add(coeff, word, power, c * scalar)

    def is_zero(self) -> bool:
        return not self.terms

    def term_bidegree(self, key: TermKey) -> Bidegree:
        coeff, word, power = key
        b = self.model.monomial_bidegree(coeff) + word_bidegree(word, self.source, self.ctx).scale(power)
        return b.twist_mod(self.ctx.d) if self.mode is Mode.ETALE else b

    def sorted_terms(self) -> List[Tuple[TermKey, int]]:
        return sorted(self.terms.items(),
                      key=lambda kv: (self.term_bidegree(kv[0]), kv[0][2], format_word(kv[0][1]), kv[0][0]))

    @staticmethod
    def format_term(key: TermKey, c: int) -> str:
        coeff, word, power = key
        inner = f"{format_word(word)} x" if word else 'x'
        if power > 1:
            inner = f"({inner})^{power}" if word else f"x^{power}"
        parts = []
        if c != 1:
            parts.append(str(c))
        if coeff:
            parts.append(format_monomial(coeff))
        parts.append(inner)
        return ' '.join(parts)

    def format(self) -> str:
        if not self.terms:
            return '0'
        return ' + '.join(self.format_term(k, c) for k, c in self.sorted_terms())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.format(),
            'source': self.source.as_list(),
            'target': None,
            'data': {
                'mode': self.mode.value,
                'model': self.model.name,
                'terms': [{'term': self.format_term(k, c),
                           'bidegree': self.term_bidegree(k).as_list()} for k, c in self.sorted_terms()],
            },
        }


def q_op(a: int, source: Bidegree, ctx: PrimeContext, model: CoefficientModel,
         mode: Mode = Mode.MOTIVIC) -> MotivicClassExpr:
    """
    Q^a on a class in bidegree source: βP^a for a > 0; Q⁰ = b^{i(ℓ−1)/d}β in
    motivic mode and β otherwise.

    Raises:
        DomainError: ℓ = 2
    """
    ctx.require_odd("Q^a")
    mode = Mode(mode)
    if a < 0:
        raise ValidationError(f"negative operation index {a}")
    if a > 0:
        return MotivicClassExpr.of_word(model, source, (BETA, P(a)), mode)
    coeff = eval_p0(source, ctx, model) if mode.keeps_frobenius else UNIT
    return MotivicClassExpr.of_word(model, source, (BETA,), mode, coeff=coeff)


# ---------------------------------------------------------------------------
# Twisted multiplication
# ---------------------------------------------------------------------------

def _coefficient_image(model: CoefficientModel, element: Element, mode: Mode) -> Element:
    if mode.keeps_frobenius:
        return element
    out: Element = {}
    for m, c in element.items():
        model.add_into(out, {model.drop_periodicity(m): c})
    return out


def twisted_mul(alpha: CoeffMonomial, word: Word, ctx: PrimeContext, model: CoefficientModel,
                mode: Mode = Mode.MOTIVIC) -> Dict[Tuple[CoeffMonomial, Word], int]:
    """
    Rewrite w(α·y) as Σ c·α′·w′(y) with coefficients on the left, using
    P^a(αy) = Σ P^s(α)P^{a−s}(y) and β(αy) = β(α)y + (−1)^{|α|} α βy, then
    Adem-reduce every residual word.

    Raises:
        DomainError: P_V or Sq_V letters (no Cartan formula is modeled)
        CoefficientModelError: a coefficient action the model cannot supply
    """
    mode = Mode(mode)
    state: Dict[Tuple[CoeffMonomial, Word], int] = {(tuple(alpha), ()): 1}

    def bump(target, key, value):
        value = (target.get(key, 0) + value) % ctx.ell
        if value:
            target[key] = value
        else:
            target.pop(key, None)

    for letter in reversed(tuple(word)):
        if letter.is_voevodsky:
            raise DomainError(f"{letter} has no Cartan formula here; convert it to P first")
        step: Dict[Tuple[CoeffMonomial, Word], int] = {}
        for (m, w), c in state.items():
            if letter.is_beta:
                for m2, c2 in _coefficient_image(model, model.apply_bockstein(m), mode).items():
                    bump(step, (m2, w), c * c2)
                sign = -1 if model.monomial_bidegree(m).deg % 2 else 1
                bump(step, (m, (BETA,) + w), c * sign)
                continue
            for s in range(letter.n + 1):
                if s == 0 and not mode.keeps_frobenius:
                    image = {m: 1}
                else:
                    image = _coefficient_image(model, model.apply_power(s, m), mode)
                for m2, c2 in image.items():
                    bump(step, (m2, (Letter(letter.kind, letter.n - s),) + w), c * c2)
        state = step

    result: Dict[Tuple[CoeffMonomial, Word], int] = {}
    for (m, w), c in state.items():
        for w2, c2 in adem_reduce(OpPoly.word(ctx, w, c, mode=mode)).terms():
            bump(result, (m, w2), int(c2))
    return result


def apply_letter(expr: MotivicClassExpr, letter: Letter) -> MotivicClassExpr:
    """Apply one letter on the left of every (unnormalized, power-free) term."""
    out = MotivicClassExpr(expr.model, expr.mode, expr.source)
    for (coeff, word, power), c in expr.terms.items():
        if power != 1:
            raise DomainError("operations on power markers are not modeled")
        for (m, w), c2 in twisted_mul(coeff, (letter,), expr.ctx, expr.model, expr.mode).items():
            out.add(m, w + word, 1, c * c2)
    return out


def apply_q0(expr: MotivicClassExpr) -> MotivicClassExpr:
    """Q⁰ on every term: b^{j(ℓ−1)/d}β with j the term's own weight (β in étale/classical mode)."""
    if not expr.mode.keeps_frobenius:
        return apply_letter(expr, BETA)
    out = MotivicClassExpr(expr.model, expr.mode, expr.source)
    for key, c in expr.terms.items():
        weight = expr.term_bidegree(key).weight
        scale = eval_p0(Bidegree(0, weight), expr.ctx, expr.model)
        single = MotivicClassExpr(expr.model, expr.mode, expr.source, {key: c})
        for (m, w, power), c2 in apply_letter(single, BETA).terms.items():
            for m2, c3 in expr.model.multiply_monomials(scale, m).items():
                out.add(m2, w, power, c2 * c3)
    return out


def apply_word(expr: MotivicClassExpr, word: Word) -> MotivicClassExpr:
    for letter in reversed(tuple(word)):
        expr = apply_letter(expr, letter)
    return expr


# ---------------------------------------------------------------------------
# Canonical form
# ---------------------------------------------------------------------------

def _unstable_terms(word: Word, n: int, ctx: PrimeContext) -> Optional[Tuple[Word, int]]:
    """(w′, e) with w x = (w′ x)^e, or None when w x = 0."""
    if not ctx.is_odd and any(letter.is_beta for letter in word):
        return word, 1
    seq = AdmissibleSeq.from_letters(word, ctx)
    exponent = 1
    while True:
        value = unstable_evaluate(seq, n, ctx)
        if value.kind is UnstableKind.ZERO:
            return None
        if value.kind is UnstableKind.BASIS:
            return value.seq.to_letters(ctx), exponent
        seq, exponent = value.seq, exponent * value.exponent


def normalize_motivic(expr: MotivicClassExpr, ctx: Optional[PrimeContext] = None,
                      model: Optional[CoefficientModel] = None) -> MotivicClassExpr:
    """
    Canonical form: coefficients on the left, admissible words, every P⁰ on
    x evaluated as b^{i(ℓ−1)/d}, and instability applied (zero above the
    excess bound, power markers at it).

    Raises:
        CoefficientModelError / NormalFormError / AdemReductionError from the components
    """
    model = model or expr.model
    ctx = ctx or model.ctx
    mode = expr.mode
    n = expr.source.deg
    result = MotivicClassExpr(model, mode, expr.source)
    pending: Dict[Tuple[CoeffMonomial, Word], int] = {}
    for (coeff, word, power), c in expr.terms.items():
        if power != 1:
            result.add(coeff, word, power, c)
        else:
            pending[(coeff, word)] = (pending.get((coeff, word), 0) + c) % ctx.ell

    frobenius_steps = 0
    while pending:
        (coeff, word), c = pending.popitem()
        if c % ctx.ell == 0:
            continue
        for w2, c2 in adem_reduce(OpPoly.word(ctx, word, mode=mode)).terms():
            scalar = c * int(c2)
            core, frobenius = split_trailing_frobenius(w2)
            if frobenius and mode.keeps_frobenius:
                frobenius_steps += 1
                periodic = eval_p0(expr.source, ctx, model)
                for (m, w3), c3 in twisted_mul(periodic, w2[:-1], ctx, model, mode).items():
                    for m2, c4 in model.multiply_monomials(coeff, m).items():
                        key = (m2, w3)
                        pending[key] = (pending.get(key, 0) + scalar * c3 * c4) % ctx.ell
                continue
            evaluated = _unstable_terms(core, n, ctx)
            if evaluated is not None:
                result.add(coeff, evaluated[0], evaluated[1], scalar)
    logger.debug(f"normalize_motivic: {frobenius_steps} P⁰ evaluation(s), {len(result.terms)} term(s)")
    return result


def specialize_etale(expr: MotivicClassExpr) -> MotivicClassExpr:
    """b ↦ 1 with weights read mod d; P⁰ letters become the identity."""
    model = expr.model
    out = MotivicClassExpr(model, Mode.ETALE, expr.source)
    for (coeff, word, power), c in expr.terms.items():
        word = tuple(letter for letter in word if not letter.is_frobenius)
        out.add(model.drop_periodicity(coeff), word, power, c)
    return out
