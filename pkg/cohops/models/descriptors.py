"""
Descriptor Types

Value objects produced by the enumerators:
- GeneratorDescriptor: a labeled free-algebra generator P^I(ι_n) with bidegree
- PoincareTable: dimensions keyed by bidegree within a window
- OperationDescriptor: one operation of a classified ring, with its
  source and target bidegrees checked at construction
- ConjectureOptions: knobs for the conjecture enumerator

Educational Notes:
    - Descriptors serialize to plain dicts (to_dict) so the CLI can emit
      stable JSON with sorted keys.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Tuple

from cohops.models.bidegree import Bidegree, Window
from cohops.services.steenrod import Word, format_word
from cohops.utils.arith import Parity, PrimeContext
from cohops.utils.exceptions import ValidationError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorDescriptor:
    """
    A generator of a free graded-commutative algebra.

    Attributes:
        letters: operation word applied to the fundamental class ι_base
        base: level n of ι_n
        bidegree: (degree, weight)
        parity: degree mod 2
        exterior: True for exterior generators (odd degree at odd ℓ)
        sign: ±1 carried by transgression labels; ignored for dimensions
        transgressive: hypothesis flag for the Borel iterator
        name: explicit label overriding the rendered word (e.g. "u", "v")
    """
    letters: Word
    base: int
    bidegree: Bidegree
    parity: Parity
    exterior: bool
    sign: int = 1
    transgressive: bool = True
    name: Optional[str] = None

    @property
    def degree(self) -> int:
        return self.bidegree.deg

    @property
    def weight(self) -> int:
        return self.bidegree.weight

    @property
    def label(self) -> str:
        """Unsigned label, e.g. 'P1 beta i2'."""
        if self.name:
            return self.name
        target = f"i{self.base}"
        return f"{format_word(self.letters)} {target}" if self.letters else target

    @property
    def signed_label(self) -> str:
        return f"-{self.label}" if self.sign < 0 else self.label

    def with_bidegree(self, bidegree: Bidegree) -> 'GeneratorDescriptor':
        return replace(self, bidegree=bidegree)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.signed_label,
            'degree': self.degree,
            'weight': self.weight,
            'parity': self.parity.value,
            'exterior': self.exterior,
            'letters': [str(letter) for letter in self.letters],
        }


def make_generator(letters: Word, base: int, bidegree: Bidegree, ctx: PrimeContext,
                   sign: int = 1, name: Optional[str] = None,
                   exterior: Optional[bool] = None) -> GeneratorDescriptor:
    """Build a descriptor with parity and exterior flag derived from the degree."""
    parity = Parity.of(bidegree.deg)
    if exterior is None:
        exterior = ctx.is_odd and parity is Parity.ODD
    return GeneratorDescriptor(tuple(letters), base, bidegree, parity, exterior,
                               sign=sign, name=name)


# ---------------------------------------------------------------------------
# Poincaré tables
# ---------------------------------------------------------------------------

@dataclass
class PoincareTable:
    """
    Dimensions keyed by (degree, weight) within a window.

    With weight_modulus set, weights are residues mod that number (étale
    twists) and window.max_weight is ignored.
    """
    window: Window
    entries: Dict[Tuple[int, int], int] = field(default_factory=dict)
    weight_modulus: Optional[int] = None
    relations: List[str] = field(default_factory=list)

    @classmethod
    def unit(cls, window: Window, weight_modulus: Optional[int] = None) -> 'PoincareTable':
        return cls(window, {(0, 0): 1}, weight_modulus)

    def key(self, deg: int, weight: int) -> Optional[Tuple[int, int]]:
        """Normalized key, or None when outside the window."""
        if deg < 0 or deg > self.window.max_degree:
            return None
        if self.weight_modulus:
            return (deg, weight % self.weight_modulus)
        if self.window.max_weight is not None and weight > self.window.max_weight:
            return None
        return (deg, weight)

    def add(self, deg: int, weight: int, count: int = 1) -> None:
        k = self.key(deg, weight)
        if k is None or count == 0:
            return
        self.entries[k] = self.entries.get(k, 0) + count
        if self.entries[k] == 0:
            del self.entries[k]

    def dimension(self, deg: int, weight: int) -> int:
        k = self.key(deg, weight)
        return self.entries.get(k, 0) if k is not None else 0

    def items(self) -> Iterator[Tuple[Tuple[int, int], int]]:
        return iter(sorted(self.entries.items()))

    def tensor(self, other: 'PoincareTable') -> 'PoincareTable':
        """Degreewise convolution (tensor product over F_ℓ)."""
        if self.weight_modulus != other.weight_modulus:
            raise ValidationError("cannot tensor tables with different weight moduli")
        result = PoincareTable(self.window, {}, self.weight_modulus,
                               list(self.relations) + list(other.relations))
        for (d1, w1), n1 in self.entries.items():
            for (d2, w2), n2 in other.entries.items():
                result.add(d1 + d2, w1 + w2, n1 * n2)
        return result

    def reduced(self) -> 'PoincareTable':
        """Drop the unit at (0,0)."""
        result = PoincareTable(self.window, dict(self.entries), self.weight_modulus, list(self.relations))
        if result.entries.get((0, 0)):
            result.add(0, 0, -1)
        return result

    def to_rows(self) -> List[Dict[str, Any]]:
        return [{'degree': d, 'weight': w, 'dimension': n} for (d, w), n in self.items()]


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

class OperationKind(str, Enum):
    ETALE_H1 = 'etale_H1'
    ETALE_HN = 'etale_Hn'
    MOTIVIC_W1 = 'motivic_w1'
    MOTIVIC_W0 = 'motivic_w0'
    MOTIVIC_DEG1_ZETA = 'motivic_deg1_zeta'
    MOTIVIC_DEG1_DESCENT = 'motivic_deg1_descent'
    CONJECTURE_GEN = 'conjecture_gen'


def _word_target(letters: List[str], source: Bidegree, ctx: PrimeContext) -> Bidegree:
    """Target of an odd-style word with P letters weight-multiplicative, PV additive."""
    deg, wt = source.deg, source.weight
    for text in reversed(letters):
        if text == 'beta':
            deg += 1
        elif text.startswith('PV'):
            a = int(text[2:])
            deg += 2 * a * (ctx.ell - 1)
            wt += a * (ctx.ell - 1)
        elif text.startswith('P'):
            a = int(text[1:])
            deg += 2 * a * (ctx.ell - 1)
            wt *= ctx.ell
        else:
            raise ValidationError(f"unexpected letter {text!r} in descriptor data")
    return Bidegree(deg, wt)


def expected_target(kind: OperationKind, data: Dict[str, Any], source: Bidegree,
                    ctx: PrimeContext) -> Bidegree:
    """The bidegree formula attached to each descriptor kind."""
    if kind is OperationKind.ETALE_H1:
        s, j = data['c_bidegree']
        eps, m = data['eps'], data['m']
        return Bidegree(s + eps + 2 * m, (j + source.weight * (eps + m)) % ctx.d)
    if kind is OperationKind.ETALE_HN:
        return Bidegree(source.deg + data['delta_degree'],
                        (source.weight * data['multiplier']) % ctx.d)
    if kind is OperationKind.MOTIVIC_W1:
        return Bidegree(source.deg + data['delta_degree'], source.weight * data['multiplier'])
    if kind is OperationKind.MOTIVIC_W0:
        return Bidegree(source.deg + data['delta_degree'], 0)
    if kind is OperationKind.MOTIVIC_DEG1_ZETA:
        s, j = data['c_bidegree']
        eps, m = data['eps'], data['m']
        return Bidegree(s + eps + 2 * m, j + eps + m)
    if kind is OperationKind.MOTIVIC_DEG1_DESCENT:
        s, t = data['c_bidegree']
        eps, m = data['eps'], data['m']
        b = (source.weight - 1) * (eps + m)
        return Bidegree(s + eps + 2 * m, t + b + eps + m)
    if kind is OperationKind.CONJECTURE_GEN:
        return _word_target(data['letters'], source, ctx)
    raise ValidationError(f"unknown operation kind {kind!r}")


@dataclass(frozen=True)
class OperationDescriptor:
    """
    One operation of a classified ring.

    The constructor checks that target equals the kind's bidegree formula
    applied to source.

    Raises:
        ValidationError: target inconsistent with the formula
    """
    kind: OperationKind
    data: Dict[str, Any]
    source: Bidegree
    target: Bidegree
    label: str
    ctx: PrimeContext
    stable: bool = False

    def __post_init__(self):
        expected = expected_target(self.kind, self.data, self.source, self.ctx)
        if expected != self.target:
            raise ValidationError(
                f"{self.kind.value} descriptor {self.label!r}: target {self.target} "
                f"does not match formula value {expected}"
            )

    @property
    def shift(self) -> Bidegree:
        return self.target - self.source

    def sort_key(self):
        return (self.target.deg, self.target.weight, _data_key(self.data))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.label,
            'source': self.source.as_list(),
            'target': self.target.as_list(),
            'data': dict(self.data, kind=self.kind.value, stable=self.stable),
        }


def _data_key(data: Dict[str, Any]) -> str:
    return repr(sorted(data.items()))


@dataclass(frozen=True)
class ConjectureOptions:
    """
    Options for the conjectural generator set.

    Attributes:
        excess_threshold: bound in the excess condition (None means the source degree n)
        strict_b: use '<' instead of '≤' in the weight condition on the P_V part
    """
    excess_threshold: Optional[int] = None
    strict_b: bool = False

    def __post_init__(self):
        if self.excess_threshold is not None and self.excess_threshold < 1:
            raise ValidationError(f"excess_threshold must be ≥ 1, got {self.excess_threshold}")

    def threshold_for(self, n: int) -> int:
        return n if self.excess_threshold is None else self.excess_threshold
