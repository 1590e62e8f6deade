"""
Operation Expression Parser

Parses the textual form used by the CLI into an OpPoly, or into a
MotivicClassExpr when coefficient symbols, a source bidegree or a motivic
Q⁰ are involved.

Grammar (whitespace-composed, letters read left to right as composition):
    poly   := term (("+" | "-") term)*
    term   := integer? symbol("^"int)* letter* "x"?
    letter := "beta" | "P"int | "Sq"int | "PV"int | "SqV"int | "Q"int

Usage:
    from cohops.services.expression_parser import parse_expr

    parse_expr("2 Sq2 Sq2 + Sq3 Sq1", PrimeContext(2))
    parse_expr("b^2 P1", ctx, Mode.MOTIVIC, model=model, source=Bidegree(4, 2))

Q letters are expanded on the spot: Q^a = βP^a for a > 0, Q⁰ = β outside
motivic mode and b^{j(ℓ−1)/d}β in motivic mode.
"""

import logging
import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from cohops.models.bidegree import Bidegree
from cohops.models.coefficient_model import UNIT, CoefficientModel, CoeffMonomial, builtin_model
from cohops.services.motivic import MotivicClassExpr, apply_q0, apply_word
from cohops.services.steenrod import BETA, Letter, LetterKind, Mode, OpPoly, P
from cohops.utils.arith import PrimeContext
from cohops.utils.exceptions import ExpressionSyntaxError, UnknownSymbolError

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r'\s*(?:(?P<op>[+-])|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*(?:\^\d+)?)|(?P<bad>\S))')
_LETTER_RE = re.compile(r'^(SqV|Sq|PV|P|Q)(\d+)$')
_LETTER_KINDS = {'SqV': LetterKind.SQV, 'Sq': LetterKind.SQ, 'PV': LetterKind.PV, 'P': LetterKind.P}

Q0 = 'Q0'
Step = Union[Letter, str]


@dataclass
class ParsedTerm:
    sign: int = 1
    scalar: int = 1
    coeff: List[Tuple[str, int]] = field(default_factory=list)
    steps: List[Step] = field(default_factory=list)
    closed: bool = False


class ExpressionParser:
    """
    Tokenizes and parses one expression against a prime context, a mode and
    an optional coefficient model.
    """

    def __init__(self, ctx: PrimeContext, mode: Mode = Mode.CLASSICAL,
                 model: Optional[CoefficientModel] = None, source: Optional[Bidegree] = None):
        self.ctx = ctx
        self.mode = Mode(mode)
        self.model = model
        self.source = source

    def _tokens(self, text: str) -> List[Tuple[str, str, int]]:
        tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            match = _TOKEN_RE.match(text, pos)
            kind = match.lastgroup
            value = match.group(kind)
            start = match.start(kind)
            if kind == 'bad':
                raise ExpressionSyntaxError(f"unexpected character {value!r}", start)
            tokens.append((kind, value, start))
            pos = match.end()
        return tokens

    def _letter(self, name: str, position: int) -> Optional[List[Step]]:
        """Steps for a letter token, or None when the token is not a letter."""
        if name == 'beta':
            return [BETA]
        match = _LETTER_RE.match(name)
        if not match:
            return None
        family, index = match.group(1), int(match.group(2))
        if family == 'Q':
            if not self.ctx.is_odd:
                raise ExpressionSyntaxError("Q letters require odd ℓ", position)
            if index > 0:
                return [BETA, P(index)]
            if self.mode.keeps_frobenius:
                if self.source is None:
                    raise ExpressionSyntaxError(
                        "Q0 in motivic mode needs a source bidegree (--source n,i)", position)
                return [Q0]
            return [BETA]
        if family in ('Sq', 'SqV') and self.ctx.is_odd:
            raise ExpressionSyntaxError(f"{family} letters require ℓ=2", position)
        if family in ('P', 'PV') and not self.ctx.is_odd:
            raise ExpressionSyntaxError(f"{family} letters require odd ℓ; use Sq letters at ℓ=2", position)
        return [Letter(_LETTER_KINDS[family], index)]

    def _dispatch_token(self, term: ParsedTerm, kind: str, value: str, position: int) -> None:
        """Fold one token into the current term."""
        if term.closed:
            raise ExpressionSyntaxError(f"nothing may follow x, got {value!r}", position)
        if kind == 'int':
            if term.coeff or term.steps or term.scalar != 1:
                raise ExpressionSyntaxError(f"integer {value} must lead its term", position)
            term.scalar = int(value)
            return
        name, _, exponent = value.partition('^')
        steps = None if exponent else self._letter(name, position)
        if steps is not None:
            term.steps.extend(steps)
            return
        if name == 'x' and not exponent and not (self.model and self.model.has_symbol('x')):
            term.closed = True
            return
        if self.model is None or not self.model.has_symbol(name):
            raise UnknownSymbolError(f"unknown symbol {name}", position)
        if term.steps:
            raise ExpressionSyntaxError(f"coefficient {name} must precede the operation letters", position)
        term.coeff.append((name, int(exponent) if exponent else 1))

    def _split_terms(self, text: str) -> List[ParsedTerm]:
        terms: List[ParsedTerm] = []
        current: Optional[ParsedTerm] = None
        expecting = True
        for kind, value, position in self._tokens(text):
            if kind == 'op':
                if not expecting and current is not None:
                    terms.append(current)
                elif current is not None:
                    raise ExpressionSyntaxError(f"unexpected {value!r}", position)
                current = ParsedTerm(sign=-1 if value == '-' else 1)
                expecting = True
                continue
            if current is None:
                current = ParsedTerm()
            self._dispatch_token(current, kind, value, position)
            expecting = False
        if current is None:
            raise ExpressionSyntaxError("empty expression", 0)
        if expecting:
            raise ExpressionSyntaxError("expression ends with an operator", len(text.rstrip()))
        terms.append(current)
        return terms

    def parse(self, text: str) -> Union[OpPoly, MotivicClassExpr]:
        terms = self._split_terms(text)
        needs_model = self.source is not None or any(t.coeff or Q0 in t.steps for t in terms)
        if not needs_model:
            poly = OpPoly.zero(self.ctx, self.mode)
            for t in terms:
                poly = poly + OpPoly.word(self.ctx, tuple(t.steps), t.sign * t.scalar, mode=self.mode)
            logger.debug(f"Parsed {len(terms)} term(s) into {len(poly)} word(s)")
            return poly
        return self._motivic(terms)

    def _apply_steps(self, model: CoefficientModel, source: Bidegree, steps: List[Step]) -> MotivicClassExpr:
        """Apply the letter runs between motivic Q0 markers from the right."""
        expr = MotivicClassExpr.of_word(model, source, (), self.mode)
        run: List[Letter] = []
        for step in reversed(steps):
            if step != Q0:
                run.insert(0, step)
                continue
            expr = apply_q0(apply_word(expr, tuple(run)))
            run = []
        return apply_word(expr, tuple(run))

    def _motivic(self, terms: List[ParsedTerm]) -> MotivicClassExpr:
        model = self.model or builtin_model('trivial', self.ctx)
        source = self.source or Bidegree(0, 0)
        result = MotivicClassExpr(model, self.mode, source)
        for t in terms:
            coeff: CoeffMonomial = model.normalize(t.coeff) if t.coeff else UNIT
            if Q0 in t.steps:
                expr = self._apply_steps(model, source, t.steps)
            else:
                expr = MotivicClassExpr.of_word(model, source, tuple(t.steps), self.mode)
            for (m, word, power), c in expr.terms.items():
                for m2, c2 in model.multiply_monomials(coeff, m).items():
                    result.add(m2, word, power, t.sign * t.scalar * c * c2)
        return result


def parse_expr(text: str, ctx: PrimeContext, mode: Mode = Mode.CLASSICAL,
               model: Optional[CoefficientModel] = None,
               source: Optional[Bidegree] = None) -> Union[OpPoly, MotivicClassExpr]:
    """
    Parse an operation expression.

    Raises:
        ExpressionSyntaxError: malformed input (message carries the position)
        UnknownSymbolError: a symbol that is neither a letter nor a model symbol
    """
    return ExpressionParser(ctx, mode, model, source).parse(text)
