"""
Unstable Operation Rings

Generator sets of H*(K_n) as free graded-commutative algebras on P^I(ι_n),
their monomial bases and Poincaré tables, and an independent derivation of
the same generators by iterating Borel transgression with Kudo's rules.

Usage:
    from cohops.services.unstable import cartan_generators, iterate_borel

    gens = cartan_generators(2, PrimeContext(3), max_degree=30)
    result = iterate_borel('K1', 2, PrimeContext(3), Window(30))
    result.generators, result.safe_window

Educational Notes:
    - Dimension tables never look at label signs.
    - Each Borel stage is truncated to the window. iterate_borel records a
      floor for every dropped generator and reports the sub-window no
      descendant of a dropped generator can reach as safe_window.
"""

import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

from cohops.models.bidegree import Bidegree, Window
from cohops.models.descriptors import GeneratorDescriptor, PoincareTable, make_generator
from cohops.services.steenrod import (
    BETA, P, Sq, admissible_sequences, degree_weight, excess, format_word,
)
from cohops.utils.arith import Parity, PrimeContext
from cohops.utils.exceptions import DomainError, ValidationError

logger = logging.getLogger(__name__)

BOREL_BASES = ('K1', 'K2')


# ---------------------------------------------------------------------------
# Cartan generators
# ---------------------------------------------------------------------------

def _cartan_condition(seq, n: int, ctx: PrimeContext) -> bool:
    e = excess(seq, ctx)
    if ctx.is_odd:
        return e < n or (e == n and seq.leading_bockstein == 1)
    return e < n


def cartan_generators(n: int, ctx: PrimeContext, max_degree: int,
                      weight: int = 1) -> List[GeneratorDescriptor]:
    """
    Generators P^I(ι_n) of H*(K_n) up to max_degree.

    Odd ℓ keeps admissible I with e(I) < n, or e(I) = n and ε₀ = 1;
    ℓ = 2 keeps Sq^I with e(I) < n. A generator with k power letters has
    weight weight·ℓ^k.

    Raises:
        ValidationError: n < 1
    """
    if n < 1:
        raise ValidationError(f"n must be ≥ 1, got {n}")
    gens = []
    for seq in admissible_sequences(max_degree - n, ctx, max_excess=n):
        if not _cartan_condition(seq, n, ctx):
            continue
        dw = degree_weight(seq, ctx)
        gens.append(make_generator(seq.to_letters(ctx), n,
                                   Bidegree(n + dw.delta_degree, weight * dw.multiplier), ctx))
    logger.debug(f"cartan_generators(n={n}, ℓ={ctx.ell}, ≤{max_degree}): {len(gens)} generator(s)")
    return gens


# ---------------------------------------------------------------------------
# Monomial bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Monomial:
    """A product of generator powers, factors as (label, exponent)."""
    factors: Tuple[Tuple[str, int], ...]
    bidegree: Bidegree

    def __str__(self):
        if not self.factors:
            return '1'
        return ' * '.join(f"({label})" if e == 1 else f"({label})^{e}" for label, e in self.factors)


def _check_generators(gens: List[GeneratorDescriptor]) -> None:
    seen = set()
    for g in gens:
        if g.label in seen:
            raise ValidationError(f"duplicate generator label {g.label!r}")
        if g.degree <= 0:
            raise ValidationError(f"generator {g.label!r} must have positive degree")
        seen.add(g.label)


def _max_exponent(g: GeneratorDescriptor, window: Window) -> int:
    if g.exterior:
        return 1
    return window.max_degree // g.degree


def monomial_basis(gens: List[GeneratorDescriptor], window: Window, ctx: PrimeContext,
                   reduced: bool = False, weight_modulus: Optional[int] = None) -> PoincareTable:
    """
    Poincaré table of the free graded-commutative algebra on gens.

    Exterior generators contribute (1 + x), polynomial ones 1 + x + x² + ⋯
    truncated to the window. With reduced=True the unit is dropped.

    Raises:
        ValidationError: duplicate labels or a generator of degree ≤ 0
    """
    _check_generators(gens)
    table = PoincareTable.unit(window, weight_modulus)
    for g in gens:
        factor = PoincareTable.unit(window, weight_modulus)
        for k in range(1, _max_exponent(g, window) + 1):
            factor.add(g.degree * k, g.weight * k)
        table = table.tensor(factor)
    return table.reduced() if reduced else table


def enumerate_monomials(gens: List[GeneratorDescriptor], window: Window) -> List[Monomial]:
    """
    The monomials counted by monomial_basis, in (degree, weight, text) order.

    Raises:
        ValidationError: duplicate labels or a generator of degree ≤ 0
    """
    _check_generators(gens)
    out: List[Monomial] = []

    def walk(k: int, factors: List[Tuple[str, int]], b: Bidegree):
        if k == len(gens):
            out.append(Monomial(tuple(factors), b))
            return
        g = gens[k]
        for e in range(_max_exponent(g, window) + 1):
            nb = b + g.bidegree.scale(e)
            if not window.contains(nb):
                break
            walk(k + 1, factors + ([(g.signed_label, e)] if e else []), nb)

    walk(0, [], Bidegree(0, 0))
    return sorted(out, key=lambda m: (m.bidegree, str(m)))


# ---------------------------------------------------------------------------
# ℓ-simple systems
# ---------------------------------------------------------------------------

def _power_family(g: GeneratorDescriptor, window: Window, ctx: PrimeContext,
                  letter, step: int, dropped: Optional[List[Bidegree]]) -> List[GeneratorDescriptor]:
    family = [g]
    current = g
    while True:
        a = current.degree // step
        nb = current.bidegree.scale(ctx.ell)
        if not window.contains(nb):
            if dropped is not None:
                dropped.append(nb)
            break
        current = make_generator((letter(a),) + current.letters, current.base, nb, ctx,
                                 sign=current.sign, exterior=False)
        family.append(current)
    return family


def ell_simple_system(gens: List[GeneratorDescriptor], window: Window, ctx: PrimeContext,
                      dropped: Optional[List[Bidegree]] = None) -> List[GeneratorDescriptor]:
    """
    Expand each even generator x of degree 2a at odd ℓ into x, x^ℓ = P^a x,
    x^{ℓ²} = P^{aℓ}P^a x, … inside the window. Odd generators, and every
    generator at ℓ = 2, are returned unchanged. The first power of each
    family that leaves the window is appended to dropped.
    """
    if not ctx.is_odd:
        return list(gens)
    out = []
    for g in gens:
        if g.parity is Parity.EVEN:
            out.extend(_power_family(g, window, ctx, P, 2, dropped))
        else:
            out.append(g)
    return out


def _two_simple_system(gens: List[GeneratorDescriptor], window: Window, ctx: PrimeContext,
                       dropped: Optional[List[Bidegree]] = None) -> List[GeneratorDescriptor]:
    """Square families x, x² = Sq^q x, x⁴, … used by the ℓ = 2 Borel step."""
    out = []
    for g in gens:
        out.extend(_power_family(g, window, ctx, Sq, 1, dropped))
    return out


# ---------------------------------------------------------------------------
# Borel transgression
# ---------------------------------------------------------------------------

def borel_step(system: List[GeneratorDescriptor], ctx: PrimeContext) -> List[GeneratorDescriptor]:
    """
    One transgression K_n → K_{n+1} on a simple system.

    y = τ(x) keeps the letters on ι_{n+1} with sign (−1)^{#β}; at odd ℓ an
    even x of degree 2a also gives z = −βP^a(y) of degree 2aℓ + 2 and
    weight ℓ·wt(y).

    Raises:
        DomainError: an input not marked transgressive
    """
    out = []
    for x in system:
        if not x.transgressive:
            raise DomainError(f"generator {x.label!r} is not transgressive")
        bockstein_count = sum(1 for letter in x.letters if letter == BETA)
        y_sign = x.sign * (-1 if bockstein_count % 2 else 1)
        y = make_generator(x.letters, x.base + 1, Bidegree(x.degree + 1, x.weight), ctx, sign=y_sign)
        out.append(y)
        if ctx.is_odd and x.parity is Parity.EVEN:
            a = x.degree // 2
            z = make_generator((BETA, P(a)) + y.letters, y.base,
                               Bidegree(2 * a * ctx.ell + 2, y.weight * ctx.ell), ctx, sign=-y.sign)
            out.append(z)
    return out


def k1_generators(ctx: PrimeContext, weight: int = 1) -> List[GeneratorDescriptor]:
    """
    H*(K_1): F_ℓ[u, v]/(u²) with v = βu at odd ℓ, F₂[u] at ℓ = 2.
    """
    u = make_generator((), 1, Bidegree(1, weight), ctx, name='u', exterior=ctx.is_odd)
    if not ctx.is_odd:
        return [u]
    v = make_generator((BETA,), 1, Bidegree(2, weight), ctx, name='v')
    return [u, v]


def _truncate(gens: List[GeneratorDescriptor], window: Window, stage: int,
              dropped: List[Bidegree]) -> List[GeneratorDescriptor]:
    kept = [g for g in gens if window.contains(g.bidegree)]
    dropped.extend(g.bidegree for g in gens if not window.contains(g.bidegree))
    if len(kept) < len(gens):
        logger.debug(f"Borel stage {stage}: window dropped {len(gens) - len(kept)} generator(s)")
    return kept


@dataclass
class BorelResult:
    """
    Generators of H*(K_n) from the Borel iteration.

    safe_window is the part of the requested window where the list is
    complete: no descendant of a generator dropped by truncation reaches it.
    """
    generators: List[GeneratorDescriptor]
    window: Window
    safe_window: Window


def safe_window(window: Window, floors: List[Bidegree]) -> Window:
    """
    Shrink window below every floor it still contains.

    A floor is the least bidegree a descendant of a dropped generator can
    have at the final level: degree grows by one per remaining stage and
    weight never drops.
    """
    max_degree = window.max_degree
    for floor in floors:
        if window.max_weight is None or floor.weight <= window.max_weight:
            max_degree = min(max_degree, floor.deg - 1)
    return Window(max_degree, window.max_weight)


def iterate_borel(base: str, target_n: int, ctx: PrimeContext, window: Window,
                  weight: int = 1) -> BorelResult:
    """
    Generators of H*(K_target_n) by repeated Borel transgression.

    Args:
        base: 'K1' (start from H*(K_1)) or 'K2' (start from the Cartan set of K_2)
        target_n: level to reach, ≥ 2
        window: truncation applied after every stage

    Raises:
        ValidationError: unknown base or target_n < 2
        DomainError: window too small to contain ι
    """
    if base not in BOREL_BASES:
        raise ValidationError(f"base must be one of {', '.join(BOREL_BASES)}, got {base!r}")
    if target_n < 2:
        raise ValidationError(f"target_n must be ≥ 2, got {target_n}")
    if window.max_degree < target_n or (window.max_weight is not None and window.max_weight < weight):
        raise DomainError(f"window too small to contain ι_{target_n}")

    if base == 'K1':
        level, gens = 1, k1_generators(ctx, weight)
    else:
        level, gens = 2, cartan_generators(2, ctx, window.max_degree, weight)
    gens = [replace(g, name=None) for g in gens]

    floors: List[Bidegree] = []
    while level < target_n:
        remaining = target_n - level
        dropped: List[Bidegree] = []
        if ctx.is_odd:
            system = ell_simple_system(gens, window, ctx, dropped)
        else:
            system = _two_simple_system(gens, window, ctx, dropped)
        floors.extend(Bidegree(b.deg + remaining, b.weight) for b in dropped)
        dropped = []
        gens = _truncate(borel_step(system, ctx), window, level + 1, dropped)
        floors.extend(Bidegree(b.deg + remaining - 1, b.weight) for b in dropped)
        level += 1
        logger.debug(f"Borel stage K_{level}: {len(gens)} generator(s)")

    safe = safe_window(window, floors)
    if safe != window:
        logger.warning(f"iterate_borel: complete only up to degree {safe.max_degree}")
    gens = sorted(gens, key=lambda g: (g.bidegree, format_word(g.letters)))
    return BorelResult(gens, window, safe)
