"""
Coefficient Models

A CoefficientModel is a finite presentation of the bigraded coefficient ring
H^{*,*}(k) (kind "motivic") or of its étale analogue ⊕ H^s_et(k, μ^{⊗t})
(kind "etale", twists read mod d), together with a P-action, a Bockstein
and the distinguished elements b, [ζ], [−1].

Features:
- Graded-commutative monomial arithmetic with exterior odd generators at odd ℓ
- Cartan-extended P^a and β on monomials, with the default actions
  P⁰(g) = g·b^{wt(g)(ℓ−1)/d} and P^s(g) = g^ℓ when 2s = deg g
- Dimension tables for the motivic and étale readings
- Shipped models (trivial, alg-closed, real-etale) and a JSON/YAML loader

Usage:
    from cohops.models.coefficient_model import load_model
    from cohops.utils.arith import PrimeContext

    model = load_model('alg-closed', PrimeContext(3))
    model.apply_power(1, model.monomial('zeta'))

Model file format (version "1"):
    {
      "version": "1", "name": "local-field", "kind": "etale",
      "ell": 3, "d": 2, "cohomological_dimension": 2,
      "generators": [{"symbol": "chi", "degree": 1, "weight": 0}, ...],
      "products": {"chi*br": {}},
      "p_action": {"1:br": {}},
      "bockstein": {"chi": {}},
      "distinguished": {"b": null, "zeta": null, "minus_one": null}
    }

Educational Notes:
    - Files are read with yaml.safe_load, so JSON and YAML both work.
    - Unknown fields are rejected rather than ignored.
"""

import logging
import os
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Tuple

import yaml

from cohops.models.bidegree import Bidegree, Window
from cohops.models.descriptors import PoincareTable
from cohops.utils.arith import PrimeContext
from cohops.utils.exceptions import CoefficientModelError, ValidationError

logger = logging.getLogger(__name__)

CoeffMonomial = Tuple[Tuple[str, int], ...]
Element = Dict[CoeffMonomial, int]

UNIT: CoeffMonomial = ()

SCHEMA_VERSION = '1'
BUILTIN_MODELS = ('trivial', 'alg-closed', 'real-etale')

_SYMBOL_RE = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')
_MODEL_FIELDS = {
    'version', 'name', 'kind', 'ell', 'd', 'description', 'cohomological_dimension',
    'generators', 'products', 'p_action', 'bockstein', 'distinguished',
}
_GENERATOR_FIELDS = {'symbol', 'degree', 'weight', 'twist', 'truncation'}
_DISTINGUISHED_FIELDS = {'b', 'zeta', 'minus_one'}


class ModelKind(str, Enum):
    MOTIVIC = 'motivic'
    ETALE = 'etale'


@dataclass(frozen=True)
class CoeffGenerator:
    """A generator of the coefficient ring; x^truncation = 0 when truncation is set."""
    symbol: str
    bidegree: Bidegree
    truncation: Optional[int] = None


def format_monomial(m: CoeffMonomial) -> str:
    if not m:
        return '1'
    return '*'.join(sym if exp == 1 else f"{sym}^{exp}" for sym, exp in m)


def format_element(element: Element) -> str:
    if not element:
        return '0'
    parts = []
    for m, c in sorted(element.items()):
        text = format_monomial(m)
        parts.append(text if c == 1 else f"{c} {text}")
    return ' + '.join(parts)


@dataclass
class CoefficientModel:
    """
    Bigraded F_ℓ-algebra model with P-action and distinguished elements.

    Attributes:
        products: relations keyed by monomial; an empty image means the
            monomial (and every multiple of it) vanishes, a nonempty image
            replaces the exact monomial
        p_action: declared P^a(g) images keyed by (a, symbol)
        bockstein: declared β(g) images keyed by symbol
        b / zeta / minus_one: symbols of the distinguished elements, if any
    """
    name: str
    ctx: PrimeContext
    kind: ModelKind = ModelKind.MOTIVIC
    generators: Tuple[CoeffGenerator, ...] = ()
    products: Dict[CoeffMonomial, Element] = field(default_factory=dict)
    p_action: Dict[Tuple[int, str], Element] = field(default_factory=dict)
    bockstein: Dict[str, Element] = field(default_factory=dict)
    b: Optional[str] = None
    zeta: Optional[str] = None
    minus_one: Optional[str] = None
    cohomological_dimension: Optional[int] = None
    description: str = ''
    _power_cache: Dict[Tuple[int, CoeffMonomial], Element] = field(
        default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.kind = ModelKind(self.kind)
        self.generators = tuple(self.generators)
        self._index = {g.symbol: k for k, g in enumerate(self.generators)}
        self.validate()

    # ------------------------------------------------------------------
    # Symbols and monomials
    # ------------------------------------------------------------------

    @property
    def symbols(self) -> List[str]:
        return [g.symbol for g in self.generators]

    def has_symbol(self, symbol: str) -> bool:
        return symbol in self._index

    def generator(self, symbol: str) -> CoeffGenerator:
        try:
            return self.generators[self._index[symbol]]
        except KeyError:
            raise CoefficientModelError(f"unknown symbol {symbol} in model {self.name!r}")

    def truncation_of(self, symbol: str) -> Optional[int]:
        g = self.generator(symbol)
        if g.truncation is not None:
            return g.truncation
        if self.ctx.is_odd and g.bidegree.deg % 2 == 1:
            return 2
        return None

    def monomial(self, symbol: str, exponent: int = 1) -> CoeffMonomial:
        self.generator(symbol)
        return ((symbol, exponent),) if exponent else UNIT

    def normalize(self, pairs) -> CoeffMonomial:
        merged: Dict[str, int] = {}
        for sym, exp in pairs:
            self.generator(sym)
            merged[sym] = merged.get(sym, 0) + exp
        return tuple(sorted(((s, e) for s, e in merged.items() if e), key=lambda p: self._index[p[0]]))

    def parse_monomial(self, text: str) -> CoeffMonomial:
        text = text.strip()
        if text in ('', '1'):
            return UNIT
        pairs = []
        for factor in text.split('*'):
            sym, _, exp = factor.strip().partition('^')
            pairs.append((sym.strip(), int(exp) if exp else 1))
        return self.normalize(pairs)

    def monomial_bidegree(self, m: CoeffMonomial) -> Bidegree:
        deg = wt = 0
        for sym, exp in m:
            g = self.generator(sym)
            deg += g.bidegree.deg * exp
            wt += g.bidegree.weight * exp
        return Bidegree(deg, wt)

    def _comparable(self, b: Bidegree) -> Bidegree:
        return b.twist_mod(self.ctx.d) if self.kind is ModelKind.ETALE else b

    def _divides(self, small: CoeffMonomial, big: CoeffMonomial) -> bool:
        have = dict(big)
        return all(have.get(sym, 0) >= exp for sym, exp in small)

    def is_killed(self, m: CoeffMonomial) -> bool:
        for sym, exp in m:
            trunc = self.truncation_of(sym)
            if trunc is not None and exp >= trunc:
                return True
        if self.cohomological_dimension is not None:
            if self.monomial_bidegree(m).deg > self.cohomological_dimension:
                return True
        return any(not image and self._divides(key, m) for key, image in self.products.items())

    # ------------------------------------------------------------------
    # Multiplication
    # ------------------------------------------------------------------

    def _reorder_sign(self, m1: CoeffMonomial, m2: CoeffMonomial) -> int:
        if not self.ctx.is_odd:
            return 1
        swaps = 0
        for sym2, exp2 in m2:
            deg2 = self.generator(sym2).bidegree.deg * exp2
            for sym1, exp1 in m1:
                if self._index[sym1] > self._index[sym2]:
                    swaps += deg2 * self.generator(sym1).bidegree.deg * exp1
        return -1 if swaps % 2 else 1

    def multiply_monomials(self, m1: CoeffMonomial, m2: CoeffMonomial) -> Element:
        sign = self._reorder_sign(m1, m2)
        merged = self.normalize(list(m1) + list(m2))
        if self.is_killed(merged):
            return {}
        image = self.products.get(merged)
        if image:
            return {k: (v * sign) % self.ctx.ell for k, v in image.items() if (v * sign) % self.ctx.ell}
        return {merged: sign % self.ctx.ell}

    def multiply(self, e1: Element, e2: Element) -> Element:
        out: Element = {}
        for m1, c1 in e1.items():
            for m2, c2 in e2.items():
                for m, c in self.multiply_monomials(m1, m2).items():
                    out[m] = (out.get(m, 0) + c * c1 * c2) % self.ctx.ell
        return {m: c for m, c in out.items() if c}

    def scale(self, element: Element, scalar: int) -> Element:
        return {m: (c * scalar) % self.ctx.ell for m, c in element.items() if (c * scalar) % self.ctx.ell}

    def add_into(self, target: Element, element: Element, scalar: int = 1) -> None:
        for m, c in element.items():
            value = (target.get(m, 0) + c * scalar) % self.ctx.ell
            if value:
                target[m] = value
            else:
                target.pop(m, None)

    # ------------------------------------------------------------------
    # Distinguished elements
    # ------------------------------------------------------------------

    def periodicity_power(self, exponent: int) -> CoeffMonomial:
        """b^exponent."""
        if exponent == 0:
            return UNIT
        if self.b is None:
            raise CoefficientModelError(f"model {self.name!r} has no periodicity element b")
        return self.monomial(self.b, exponent)

    def drop_periodicity(self, m: CoeffMonomial) -> CoeffMonomial:
        """Specialize b ↦ 1."""
        return tuple(p for p in m if p[0] != self.b)

    # ------------------------------------------------------------------
    # Operations on coefficients
    # ------------------------------------------------------------------

    def _generator_power(self, a: int, symbol: str) -> Element:
        declared = self.p_action.get((a, symbol))
        if declared is not None:
            return dict(declared)
        g = self.generator(symbol)
        single = ((symbol, 1),)
        if a == 0:
            weight = g.bidegree.weight
            if self.kind is ModelKind.ETALE or weight == 0:
                return {single: 1}
            if self.b is None:
                raise CoefficientModelError(
                    f"P^0 of {symbol} needs the periodicity element b, which model {self.name!r} lacks")
            exponent = weight * (self.ctx.ell - 1) // self.ctx.d
            return self.multiply_monomials(single, self.periodicity_power(exponent))
        top = g.bidegree.deg if not self.ctx.is_odd else None
        if (self.ctx.is_odd and 2 * a == g.bidegree.deg) or (top is not None and a == top):
            power = self.normalize([(symbol, self.ctx.ell)])
            return {} if self.is_killed(power) else {power: 1}
        return {}

    def apply_power(self, a: int, m: CoeffMonomial) -> Element:
        """P^a (Sq^a at ℓ=2) of a monomial via the Cartan formula."""
        key = (a, m)
        if key in self._power_cache:
            return dict(self._power_cache[key])
        if not m:
            result = {UNIT: 1} if a == 0 else {}
        else:
            sym, exp = m[0]
            rest = ((sym, exp - 1),) + m[1:] if exp > 1 else m[1:]
            result: Element = {}
            for s in range(a + 1):
                left = self._generator_power(s, sym)
                if not left:
                    continue
                right = self.apply_power(a - s, rest)
                if right:
                    self.add_into(result, self.multiply(left, right))
        self._power_cache[key] = dict(result)
        return result

    def apply_bockstein(self, m: CoeffMonomial) -> Element:
        """β(g·rest) = β(g)·rest + (−1)^{deg g} g·β(rest)."""
        if not m:
            return {}
        sym, exp = m[0]
        single = ((sym, 1),)
        rest = ((sym, exp - 1),) + m[1:] if exp > 1 else m[1:]
        result: Element = {}
        beta_g = self.bockstein.get(sym, {})
        if beta_g:
            self.add_into(result, self.multiply(beta_g, {rest: 1}))
        beta_rest = self.apply_bockstein(rest)
        if beta_rest:
            sign = -1 if self.generator(sym).bidegree.deg % 2 else 1
            self.add_into(result, self.multiply({single: 1}, beta_rest), sign)
        return result

    # ------------------------------------------------------------------
    # Bases and dimension tables
    # ------------------------------------------------------------------

    def _is_replaced(self, m: CoeffMonomial) -> bool:
        image = self.products.get(m)
        return bool(image)

    def iter_monomials(self, max_degree: int, max_weight: Optional[int] = None,
                       etale: bool = False) -> Iterator[Tuple[CoeffMonomial, Bidegree]]:
        """
        Basis monomials with degree ≤ max_degree (and weight ≤ max_weight in
        the motivic reading). The étale reading drops degree-0 generators and
        reports twists mod d.
        """
        gens = [g for g in self.generators if not (etale and g.bidegree.deg == 0)]
        if not etale and max_weight is None and any(g.bidegree.deg == 0 for g in gens):
            raise ValidationError(
                f"model {self.name!r} has degree-0 generators; a weight bound is required")
        cap = max_degree
        if self.cohomological_dimension is not None:
            cap = min(cap, self.cohomological_dimension)

        def walk(k: int, current: List[Tuple[str, int]], deg: int, wt: int):
            if k == len(gens):
                m = self.normalize(current)
                if not self.is_killed(m) and not self._is_replaced(m):
                    b = Bidegree(deg, wt)
                    yield m, (b.twist_mod(self.ctx.d) if etale else b)
                return
            g = gens[k]
            trunc = self.truncation_of(g.symbol)
            exp = 0
            while True:
                d_ = deg + exp * g.bidegree.deg
                w_ = wt + exp * g.bidegree.weight
                if d_ > cap or (not etale and max_weight is not None and w_ > max_weight):
                    break
                if trunc is not None and exp >= trunc:
                    break
                yield from walk(k + 1, current + ([(g.symbol, exp)] if exp else []), d_, w_)
                if g.bidegree.deg == 0 and g.bidegree.weight == 0:
                    break
                exp += 1

        yield from walk(0, [], 0, 0)

    def motivic_table(self, window: Window) -> PoincareTable:
        table = PoincareTable(window)
        for _, b in self.motivic_basis(window):
            table.add(b.deg, b.weight)
        return table

    def etale_table(self, window: Window) -> PoincareTable:
        table = PoincareTable(window, weight_modulus=self.ctx.d)
        for _, b in self.etale_basis(window.max_degree):
            table.add(b.deg, b.weight)
        return table

    def etale_basis(self, max_degree: int) -> List[Tuple[CoeffMonomial, Bidegree]]:
        """Basis of ⊕ H^s_et(k, μ^{⊗t}) with t read mod d."""
        return sorted(self.iter_monomials(max_degree, etale=True), key=lambda p: (p[1], p[0]))

    def motivic_basis(self, window: Window) -> List[Tuple[CoeffMonomial, Bidegree]]:
        """
        Basis of H^{*,*}(k) in the window. An étale model with d=1 is read
        through the truncation H^{s,j} = H^s_et(μ^{⊗j}) for 0 ≤ s ≤ j.
        """
        if self.kind is ModelKind.MOTIVIC:
            return sorted(self.iter_monomials(window.max_degree, window.max_weight),
                          key=lambda p: (p[1], p[0]))
        if self.ctx.d != 1:
            raise CoefficientModelError(
                f"étale model {self.name!r} has d={self.ctx.d}; a motivic reading needs d=1")
        if window.max_weight is None:
            raise ValidationError("the motivic reading of an étale model needs a weight bound")
        out = []
        for m, b in self.etale_basis(window.max_degree):
            for j in range(b.deg, window.max_weight + 1):
                out.append((m, Bidegree(b.deg, j)))
        return sorted(out, key=lambda p: (p[1], p[0]))

    # ------------------------------------------------------------------
    # Validation
    # ------------------------------------------------------------------

    def _expect(self, image: Element, expected: Bidegree, what: str) -> None:
        for m in image:
            got = self.monomial_bidegree(m)
            if self._comparable(got) != self._comparable(expected):
                raise CoefficientModelError(
                    f"model {self.name!r}: {what} has image {format_monomial(m)} in bidegree {got}, "
                    f"expected {expected}")

    def validate(self) -> None:
        """Re-check every model invariant; raises CoefficientModelError."""
        seen = set()
        for g in self.generators:
            if not _SYMBOL_RE.match(g.symbol) or g.symbol in seen:
                raise CoefficientModelError(f"model {self.name!r}: bad or duplicate symbol {g.symbol!r}")
            seen.add(g.symbol)
            if g.bidegree.deg < 0:
                raise CoefficientModelError(f"model {self.name!r}: {g.symbol} has negative degree")
            if g.bidegree == Bidegree(0, 0):
                raise CoefficientModelError(f"model {self.name!r}: {g.symbol} sits in bidegree (0,0)")
            if self.kind is ModelKind.MOTIVIC and g.bidegree.weight < 0:
                raise CoefficientModelError(f"model {self.name!r}: {g.symbol} has negative weight")
            if self.kind is ModelKind.ETALE and g.bidegree.deg == 0:
                raise CoefficientModelError(
                    f"étale model {self.name!r}: degree-0 generator {g.symbol} is not allowed")
            if g.truncation is not None and g.truncation < 2:
                raise CoefficientModelError(f"model {self.name!r}: truncation of {g.symbol} must be ≥ 2")

        ell, d = self.ctx.ell, self.ctx.d
        if self.b is not None:
            if self.kind is ModelKind.ETALE:
                raise CoefficientModelError(f"étale model {self.name!r} cannot declare b (b ↦ 1)")
            if self.generator(self.b).bidegree != Bidegree(0, d):
                raise CoefficientModelError(f"model {self.name!r}: b must sit in bidegree (0,{d})")
        if self.zeta is not None:
            if d != 1:
                raise CoefficientModelError(f"model {self.name!r}: [ζ] requires d=1")
            if self._comparable(self.generator(self.zeta).bidegree) != self._comparable(Bidegree(0, 1)):
                raise CoefficientModelError(f"model {self.name!r}: [ζ] must sit in bidegree (0,1)")
        if self.minus_one is not None:
            if ell != 2:
                raise CoefficientModelError(f"model {self.name!r}: [−1] is distinguished only at ℓ=2")
            if self._comparable(self.generator(self.minus_one).bidegree) != self._comparable(Bidegree(1, 1)):
                raise CoefficientModelError(f"model {self.name!r}: [−1] must sit in bidegree (1,1)")

        for key, image in self.products.items():
            self._expect(image, self.monomial_bidegree(key), f"product {format_monomial(key)}")
            for m in image:
                if self.is_killed(m) or m in self.products:
                    raise CoefficientModelError(
                        f"model {self.name!r}: product image {format_monomial(m)} is not a reduced monomial")
        for (a, sym), image in self.p_action.items():
            src = self.generator(sym).bidegree
            if a < 0:
                raise CoefficientModelError(f"model {self.name!r}: negative P-index for {sym}")
            if ell == 2:
                expected = Bidegree(src.deg + a, 2 * src.weight)
            else:
                expected = Bidegree(src.deg + 2 * a * (ell - 1), src.weight * ell)
            self._expect(image, expected, f"P^{a}({sym})")
        for sym, image in self.bockstein.items():
            src = self.generator(sym).bidegree
            self._expect(image, Bidegree(src.deg + 1, src.weight), f"β({sym})")


# ---------------------------------------------------------------------------
# Shipped models
# ---------------------------------------------------------------------------

def builtin_model(name: str, ctx: PrimeContext) -> CoefficientModel:
    """
    trivial:    F_ℓ in (0,0)
    alg-closed: F_ℓ[ζ] with [ζ] in (0,1), d=1, b=[ζ], P^{>0} and β zero
    real-etale: ℓ=2, F₂[σ] with σ=[−1] in degree 1, Sq¹σ = σ²
    """
    if name == 'trivial':
        return CoefficientModel('trivial', ctx, ModelKind.MOTIVIC,
                                description='F_ℓ concentrated in (0,0)')
    if name == 'alg-closed':
        if ctx.d != 1:
            raise CoefficientModelError("the alg-closed model requires d=1")
        return CoefficientModel('alg-closed', ctx, ModelKind.MOTIVIC,
                                (CoeffGenerator('zeta', Bidegree(0, 1)),),
                                b='zeta', zeta='zeta',
                                description='F_ℓ[ζ], ζ∈k')
    if name == 'real-etale':
        if ctx.ell != 2:
            raise CoefficientModelError("the real-etale model requires ℓ=2")
        return CoefficientModel('real-etale', ctx, ModelKind.ETALE,
                                (CoeffGenerator('sigma', Bidegree(1, 1)),),
                                bockstein={'sigma': {(('sigma', 2),): 1}},
                                minus_one='sigma',
                                description='H_et(R, F_2) = F_2[σ]')
    raise CoefficientModelError(f"unknown built-in model {name!r}")


def _parse_element(model_name: str, raw: Any, parse) -> Element:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise CoefficientModelError(f"model {model_name!r}: combinations must be objects, got {raw!r}")
    return {parse(text): int(coeff) for text, coeff in raw.items() if int(coeff)}


def model_from_dict(data: Dict[str, Any], source: str = '<dict>') -> CoefficientModel:
    """
    Build a model from its file representation.

    Raises:
        CoefficientModelError: wrong version, unknown fields or invalid tables
    """
    if not isinstance(data, dict):
        raise CoefficientModelError(f"{source}: model file must contain an object")
    unknown = set(data) - _MODEL_FIELDS
    if unknown:
        raise CoefficientModelError(f"{source}: unknown field(s) {', '.join(sorted(unknown))}")
    if str(data.get('version')) != SCHEMA_VERSION:
        raise CoefficientModelError(f"{source}: version must be \"{SCHEMA_VERSION}\", got {data.get('version')!r}")
    try:
        ctx = PrimeContext(int(data['ell']), int(data.get('d', 1)))
    except KeyError:
        raise CoefficientModelError(f"{source}: 'ell' is required")
    except ValidationError as e:
        raise CoefficientModelError(f"{source}: {e}")

    gens = []
    for entry in data.get('generators') or []:
        extra = set(entry) - _GENERATOR_FIELDS
        if extra:
            raise CoefficientModelError(f"{source}: unknown generator field(s) {', '.join(sorted(extra))}")
        weight = entry.get('weight', entry.get('twist', 0))
        gens.append(CoeffGenerator(str(entry['symbol']), Bidegree(int(entry['degree']), int(weight)),
                                   entry.get('truncation')))

    distinguished = data.get('distinguished') or {}
    extra = set(distinguished) - _DISTINGUISHED_FIELDS
    if extra:
        raise CoefficientModelError(f"{source}: unknown distinguished element(s) {', '.join(sorted(extra))}")

    name = str(data.get('name') or os.path.splitext(os.path.basename(source))[0])
    # bare model first so monomials can be parsed against its symbols
    shell = CoefficientModel(name, ctx, data.get('kind', 'motivic'), tuple(gens),
                             cohomological_dimension=data.get('cohomological_dimension'))
    try:
        products = {shell.parse_monomial(k): _parse_element(name, v, shell.parse_monomial)
                    for k, v in (data.get('products') or {}).items()}
        p_action = {}
        for key, v in (data.get('p_action') or {}).items():
            a_text, _, sym = str(key).partition(':')
            p_action[(int(a_text), sym.strip())] = _parse_element(name, v, shell.parse_monomial)
        bockstein = {str(k): _parse_element(name, v, shell.parse_monomial)
                     for k, v in (data.get('bockstein') or {}).items()}
    except (ValueError, TypeError) as e:
        raise CoefficientModelError(f"{source}: malformed table entry ({e})")

    model = CoefficientModel(
        name, ctx, shell.kind, tuple(gens), products, p_action, bockstein,
        b=distinguished.get('b'), zeta=distinguished.get('zeta'),
        minus_one=distinguished.get('minus_one'),
        cohomological_dimension=data.get('cohomological_dimension'),
        description=str(data.get('description', '')),
    )
    logger.info(f"Loaded coefficient model {model.name!r} ({model.kind.value}, ℓ={ctx.ell}, d={ctx.d})")
    return model


def resolve_model_path(name: str, models_dir: Optional[str]) -> Optional[str]:
    candidates = [name]
    if models_dir:
        candidates += [os.path.join(models_dir, name), os.path.join(models_dir, f"{name}.json")]
    for path in candidates:
        if os.path.isfile(path):
            return path
    return None


def load_model(name: str, ctx: Optional[PrimeContext] = None,
               models_dir: Optional[str] = None) -> CoefficientModel:
    """
    Resolve a model by path, by name under models_dir, or as a built-in.

    Args:
        name: file path, file name under models_dir, or built-in name
        ctx: requested prime context; built-ins are built for it and file
             models must match it
        models_dir: directory searched for model files

    Raises:
        CoefficientModelError: not found, invalid, or ℓ/d mismatch
    """
    path = resolve_model_path(name, models_dir)
    if path is None:
        if name in BUILTIN_MODELS:
            return builtin_model(name, ctx or PrimeContext(3))
        raise CoefficientModelError(f"coefficient model {name!r} not found")
    with open(path, 'r') as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise CoefficientModelError(f"{path}: cannot parse model file ({e})")
    model = model_from_dict(data, source=path)
    if ctx is not None and model.ctx != ctx:
        raise CoefficientModelError(
            f"model {model.name!r} is for ℓ={model.ctx.ell}, d={model.ctx.d}, "
            f"but ℓ={ctx.ell}, d={ctx.d} was requested")
    return model
