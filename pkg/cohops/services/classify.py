"""
Classified Operation Rings

Enumerators for the operation rings on H^n(−, μ^{⊗i}) (étale) and
H^{n,i} (motivic):

- etale_ops_H1 / etale_ops_Hn: free module over the étale coefficients on
  the reduced cohomology of K_n
- motivic_ops_weight1: the same over H^{*,*}(k), source weight 1 (or 0)
- motivic_ops_deg1_zeta / motivic_ops_deg1_descent: degree-1 operations
  with ζ ∈ k, resp. by Galois descent through ζ^{−b}H^{*,*}(k)
- conjecture_generators: the P^I P_V^J generator candidates for n ≥ 2i
- Classifier: runs one of the above by kind name over a bound model and window

Descriptor lists are sorted by (target degree, target weight, data).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

from cohops.models.bidegree import Bidegree, Window
from cohops.models.coefficient_model import CoefficientModel, format_monomial
from cohops.models.descriptors import (
    ConjectureOptions, GeneratorDescriptor, OperationDescriptor, OperationKind, PoincareTable,
    expected_target, make_generator,
)
from cohops.services.steenrod import BETA, AdmissibleSeq, admissible_sequences, excess
from cohops.services.unstable import cartan_generators, monomial_basis
from cohops.utils.arith import PrimeContext
from cohops.utils.exceptions import DomainError, ValidationError

logger = logging.getLogger(__name__)

K1_RELATION_TEMPLATE = "u^2 = {minus_one} u + {zeta} v"


@dataclass
class ClassificationTable:
    """Generators of the free factor plus the bigraded dimension table."""
    table: PoincareTable
    generators: List[GeneratorDescriptor] = field(default_factory=list)
    relations: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'generators': [g.to_dict() for g in self.generators],
            'table': self.table.to_rows(),
            'relations': list(self.relations),
        }


def _sorted(descriptors: List[OperationDescriptor]) -> List[OperationDescriptor]:
    return sorted(descriptors, key=lambda op: op.sort_key())


def _power_label(c_text: str, base: str, eps: int, m: int) -> str:
    parts = [] if c_text == '1' else [c_text]
    if eps:
        parts.append(base)
    if m:
        beta = f"(beta {base})" if ' ' in base else f"beta {base}"
        parts.append(beta if m == 1 else f"({beta})^{m}")
    return ' * '.join(parts) if parts else '1'


# ---------------------------------------------------------------------------
# Étale rings
# ---------------------------------------------------------------------------

def etale_ops_H1(i: int, model: CoefficientModel, window: Window, ctx: PrimeContext,
                 include_constants: bool = False) -> List[OperationDescriptor]:
    """
    Operations x ↦ c·x^ε·β(x)^m on H¹_et(−, μ^{⊗i}).

    c runs over the étale basis of the model; targets are
    (s + ε + 2m, j + i(ε + m) mod d). The constant operations (ε = m = 0)
    are omitted unless include_constants is set.
    """
    source = Bidegree(1, i % ctx.d)
    out = []
    for c, cb in model.etale_basis(window.max_degree):
        c_text = format_monomial(c)
        for eps in (0, 1):
            m = 0
            while cb.deg + eps + 2 * m <= window.max_degree:
                if eps or m or include_constants:
                    target = Bidegree(cb.deg + eps + 2 * m, (cb.weight + i * (eps + m)) % ctx.d)
                    data = {'c': c_text, 'c_bidegree': cb.as_list(), 'eps': eps, 'm': m}
                    out.append(OperationDescriptor(
                        OperationKind.ETALE_H1, data, source, target,
                        _power_label(c_text, 'x', eps, m), ctx,
                        stable=(not c and eps + m == 1)))
                m += 1
    logger.info(f"etale_ops_H1(i={i}, model={model.name}): {len(out)} descriptor(s)")
    return _sorted(out)


def _twisted_generators(n: int, i: int, ctx: PrimeContext, max_degree: int,
                        modulus: Optional[int]) -> List[GeneratorDescriptor]:
    gens = cartan_generators(n, ctx, max_degree, weight=i)
    if modulus is None:
        return gens
    return [g.with_bidegree(g.bidegree.twist_mod(modulus)) for g in gens]


def etale_ops_Hn(n: int, i: int, model: CoefficientModel, window: Window,
                 ctx: PrimeContext) -> ClassificationTable:
    """
    H_et ⊗ H̃*(K_n): Cartan generators with twists i·ℓ^k mod d, reduced
    monomial basis convolved with the model's étale table.

    Raises:
        ValidationError: n < 1
    """
    if n < 1:
        raise ValidationError(f"n must be ≥ 1, got {n}")
    gens = _twisted_generators(n, i, ctx, window.max_degree, ctx.d)
    basis = monomial_basis(gens, window, ctx, reduced=True, weight_modulus=ctx.d)
    table = basis.tensor(model.etale_table(window))
    logger.info(f"etale_ops_Hn(n={n}, i={i}): {len(gens)} generator(s), {len(table.entries)} cell(s)")
    return ClassificationTable(table, gens)


# ---------------------------------------------------------------------------
# Motivic rings
# ---------------------------------------------------------------------------

def _weight_bounded(window: Window) -> Window:
    """Weights default to the degree bound when the window leaves them open."""
    if window.max_weight is not None:
        return window
    return Window(window.max_degree, window.max_degree)


def _k1_two_generators(ctx: PrimeContext, model: CoefficientModel) -> Tuple[List[GeneratorDescriptor], str]:
    u = make_generator((), 1, Bidegree(1, 1), ctx, name='u', exterior=True)
    v = make_generator((BETA,), 1, Bidegree(2, 1), ctx, name='v')
    minus_one = f"[{model.minus_one}]" if model.minus_one else '0'
    zeta = f"[{model.zeta}]" if model.zeta else '0'
    return [u, v], K1_RELATION_TEMPLATE.format(minus_one=minus_one, zeta=zeta)


def motivic_ops_weight1(n: int, model: CoefficientModel, window: Window, ctx: PrimeContext,
                        weight: int = 1) -> ClassificationTable:
    """
    H^{*,*}(k) ⊗ H̃*(K_n) for sources of weight 1 (generators at
    (n + Δ, ℓ^k)) or weight 0 (all generators at weight 0).

    At ℓ = 2, n = 1, weight 1 the generators are u (1,1) and v = βu (2,1)
    with u² = [−1]u + [ζ]v, so u^ε v^m is still a basis.

    Raises:
        ValidationError: n < 1 or weight not in {0, 1}
    """
    if n < 1:
        raise ValidationError(f"n must be ≥ 1, got {n}")
    if weight not in (0, 1):
        raise ValidationError(f"source weight must be 0 or 1, got {weight}")
    window = _weight_bounded(window)
    relations: List[str] = []
    if not ctx.is_odd and n == 1 and weight == 1:
        gens, relation = _k1_two_generators(ctx, model)
        relations.append(relation)
    else:
        gens = cartan_generators(n, ctx, window.max_degree, weight=weight)
    basis = monomial_basis(gens, window, ctx, reduced=True)
    table = basis.tensor(model.motivic_table(window))
    table.relations = relations
    logger.info(f"motivic_ops_weight1(n={n}, weight={weight}): {len(gens)} generator(s)")
    return ClassificationTable(table, gens, relations)


def motivic_ops_deg1_zeta(i: int, model: CoefficientModel, window: Window, ctx: PrimeContext,
                          include_constants: bool = True) -> List[OperationDescriptor]:
    """
    Operations x ↦ c·(γx)^ε·β(γx)^m on H^{1,i} when ζ ∈ k, with γ of
    bidegree (0, 1−i) and c in H^{s,j}(k); targets (s + ε + 2m, j + ε + m).

    Raises:
        DomainError: d ≠ 1
    """
    if ctx.d != 1:
        raise DomainError(f"ζ is not in k when d={ctx.d}; use descent enumerator")
    window = _weight_bounded(window)
    source = Bidegree(1, i)
    out = []
    for c, cb in model.motivic_basis(window):
        c_text = format_monomial(c)
        for eps in (0, 1):
            m = 0
            while True:
                target = Bidegree(cb.deg + eps + 2 * m, cb.weight + eps + m)
                if not window.contains(target):
                    break
                if eps or m or include_constants:
                    data = {'c': c_text, 'c_bidegree': cb.as_list(), 'eps': eps, 'm': m}
                    out.append(OperationDescriptor(OperationKind.MOTIVIC_DEG1_ZETA, data, source, target,
                                                   _power_label(c_text, 'gamma x', eps, m), ctx))
                m += 1
    logger.info(f"motivic_ops_deg1_zeta(i={i}, model={model.name}): {len(out)} descriptor(s)")
    return _sorted(out)


def motivic_ops_deg1_descent(i: int, model: CoefficientModel, window: Window, ctx: PrimeContext,
                             include_constants: bool = True) -> List[OperationDescriptor]:
    """
    Degree-1 operations on H^{1,i} by Galois descent: c ∈ H^s_et(k, μ^{⊗t})
    with 0 ≤ s ≤ t + b, b = (i−1)(ε+m), acting as φ(ζ^{i−1}y) = (ζ^b c)y^ε β(y)^m
    with target (s + ε + 2m, t + b + ε + m). Twists t are integers read
    through the model's d-periodicity.
    """
    window = _weight_bounded(window)
    source = Bidegree(1, i)
    out = []
    for c, cb in model.etale_basis(window.max_degree):
        s, residue = cb.deg, cb.weight
        c_text = format_monomial(c)
        for eps in (0, 1):
            m = 0
            while s + eps + 2 * m <= window.max_degree:
                if eps or m or include_constants:
                    b = (i - 1) * (eps + m)
                    t_low, t_high = s - b, window.max_weight - b - eps - m
                    t = t_low + ((residue - t_low) % ctx.d)
                    while t <= t_high:
                        target = Bidegree(s + eps + 2 * m, t + b + eps + m)
                        data = {'c': c_text, 'c_bidegree': [s, t], 'eps': eps, 'm': m, 'b': b}
                        label = _power_label(c_text, 'y', eps, m)
                        if b:
                            label = f"zeta^{b} {label}"
                        out.append(OperationDescriptor(OperationKind.MOTIVIC_DEG1_DESCENT, data,
                                                       source, target, label, ctx))
                        t += ctx.d
                m += 1
    logger.info(f"motivic_ops_deg1_descent(i={i}, model={model.name}): {len(out)} descriptor(s)")
    return _sorted(out)


# ---------------------------------------------------------------------------
# Conjectural generators
# ---------------------------------------------------------------------------

def _split_letters(seq: AdmissibleSeq, k: int) -> List[str]:
    letters = ['beta'] * seq.eps[0]
    for j, (s_j, e_j) in enumerate(zip(seq.s, seq.eps[1:]), start=1):
        letters.append(f"P{s_j}" if j <= k else f"PV{s_j}")
        letters.extend(['beta'] * e_j)
    return letters


def _render_two(seq: AdmissibleSeq, k: int) -> str:
    """Sq^{2s_j+ε_{j−1}} for I, Sq_V for J; a trailing β becomes Sq_V^1 (Sq^1 if J is empty)."""
    parts = []
    for j, s_j in enumerate(seq.s, start=1):
        name = 'Sq' if j <= k else 'SqV'
        parts.append(f"{name}{2 * s_j + seq.eps[j - 1]}")
    if not seq.s and seq.eps[0]:
        parts.append('Sq1')
    elif seq.s and seq.eps[-1]:
        parts.append('SqV1' if k < len(seq.s) else 'Sq1')
    return ' '.join(parts) if parts else '1'


def _condition_b(seq: AdmissibleSeq, k: int, i: int, ctx: PrimeContext, strict: bool) -> bool:
    s = seq.s
    for j in range(k, len(s)):
        bound = i + (ctx.ell - 1) * sum(s[j + 1:])
        if s[j] > bound or (strict and s[j] == bound):
            return False
    return True


def _enumerate_conjecture(n: int, i: int, ctx: PrimeContext, window: Window,
                          opts: ConjectureOptions) -> Tuple[List[OperationDescriptor], List[OperationDescriptor]]:
    if n < 2 * i:
        raise DomainError(f"conjecture zone requires n≥2i, got (n,i)=({n},{i})")
    threshold = opts.threshold_for(n)
    source = Bidegree(n, i)
    kept, excluded = [], []
    for seq in admissible_sequences(window.max_degree - n, ctx, max_excess=threshold, odd_style=True):
        e = excess(seq, ctx)
        if not (e < threshold or (e == threshold and seq.leading_bockstein == 1)):
            continue
        for k in range(len(seq.s) + 1):
            if not _condition_b(seq, k, i, ctx, opts.strict_b):
                continue
            letters = _split_letters(seq, k)
            data = {'letters': letters, 'I': list(seq.s[:k]), 'J': list(seq.s[k:]),
                    'eps': list(seq.eps), 'excess': e}
            label = ' '.join(letters) if ctx.is_odd else _render_two(seq, k)
            target = expected_target(OperationKind.CONJECTURE_GEN, data, source, ctx)
            if not window.contains(target):
                continue
            op = OperationDescriptor(OperationKind.CONJECTURE_GEN, data, source, target,
                                     label or '1', ctx, stable=True)
            if n == 2 * i and target.weight < i:
                excluded.append(op)
            else:
                kept.append(op)
    if excluded:
        logger.warning(f"conjecture_generators({n},{i}): {len(excluded)} descriptor(s) excluded "
                       f"(no operations from H^{{2i,i}} to weight below i)")
    return _sorted(kept), _sorted(excluded)


def conjecture_generators(n: int, i: int, ctx: PrimeContext, window: Window,
                          opts: Optional[ConjectureOptions] = None) -> List[OperationDescriptor]:
    """
    Candidates P^I P_V^J (ℓ = 2: Sq^I Sq_V^J) on H^{n,i}, n ≥ 2i.

    IJ is admissible with e(IJ) < threshold, or ε₀ = 1 and e(IJ) = threshold;
    every J-index satisfies s_j ≤ i + (ℓ−1)·Σ_{r>j} s_r (strict with
    opts.strict_b). P letters multiply the weight by ℓ, P_V letters add
    a(ℓ−1).

    Raises:
        DomainError: n < 2i
    """
    kept, _ = _enumerate_conjecture(n, i, ctx, window, opts or ConjectureOptions())
    logger.info(f"conjecture_generators({n},{i}): {len(kept)} descriptor(s)")
    return kept


def conjecture_exclusions(n: int, i: int, ctx: PrimeContext, window: Window,
                          opts: Optional[ConjectureOptions] = None) -> List[OperationDescriptor]:
    """Descriptors removed because they would map H^{2i,i} to a weight below i."""
    _, excluded = _enumerate_conjecture(n, i, ctx, window, opts or ConjectureOptions())
    return excluded


# ---------------------------------------------------------------------------
# Service class
# ---------------------------------------------------------------------------

CLASSIFY_KINDS = (
    'etale-h1', 'etale-hn', 'motivic-weight1', 'motivic-weight0',
    'deg1-zeta', 'deg1-descent', 'conjecture',
)


class Classifier:
    """
    Service class for the classification enumerators.

    Binds a coefficient model, a window and a prime context so callers
    select an enumerator by kind name. Table kinds return a
    ClassificationTable, the others a sorted descriptor list.

    Example:
        >>> ctx = PrimeContext(3)
        >>> classifier = Classifier(builtin_model('trivial', ctx), Window(4), ctx)
        >>> [op.label for op in classifier.run('etale-h1')]
        ['x', 'beta x', 'x * beta x', '(beta x)^2']
    """

    def __init__(self, model: CoefficientModel, window: Window, ctx: PrimeContext):
        self.model = model
        self.window = window
        self.ctx = ctx

    def run(self, kind: str, n: int = 1, i: int = 1, include_constants: Optional[bool] = None,
            opts: Optional[ConjectureOptions] = None) -> Union[List[OperationDescriptor], ClassificationTable]:
        """
        Run the enumerator named by kind.

        Raises:
            ValidationError: unknown kind
        """
        if kind not in CLASSIFY_KINDS:
            raise ValidationError(f"unknown classification kind {kind!r}; expected one of {', '.join(CLASSIFY_KINDS)}")
        constants = {} if include_constants is None else {'include_constants': include_constants}
        model, window, ctx = self.model, self.window, self.ctx

        if kind == 'etale-h1':
            return etale_ops_H1(i, model, window, ctx, **constants)
        if kind == 'etale-hn':
            return etale_ops_Hn(n, i, model, window, ctx)
        if kind in ('motivic-weight1', 'motivic-weight0'):
            return motivic_ops_weight1(n, model, window, ctx, weight=1 if kind == 'motivic-weight1' else 0)
        if kind == 'deg1-zeta':
            return motivic_ops_deg1_zeta(i, model, window, ctx, **constants)
        if kind == 'deg1-descent':
            return motivic_ops_deg1_descent(i, model, window, ctx, **constants)
        return conjecture_generators(n, i, ctx, window, opts)

    def excluded(self, n: int, i: int, opts: Optional[ConjectureOptions] = None) -> List[OperationDescriptor]:
        return conjecture_exclusions(n, i, self.ctx, self.window, opts)
