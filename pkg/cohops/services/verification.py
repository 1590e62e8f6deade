"""
Built-in Verification Suites

Each suite re-checks one family of invariants with exact arithmetic and
returns a CheckResult carrying the first counterexample it met. The CLI
`check` command runs them and exits 1 on any failure.

Suites:
- lucas, wilson, d_index: arithmetic identities against sympy oracles
- census, adem, confluence, span: the Adem engine
- borel, tables: Borel–Kudo iteration against the Cartan description
- conversion, q_ops, twisted, etale: the motivic calculus
- h1_hn, descent, zeta_descent, conjecture: the classification enumerators
- parser: printer/parser round trip
"""

import itertools
import logging
import random
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from sympy import binomial, factorial, primerange

from cohops.models.bidegree import Bidegree, Window
from cohops.models.coefficient_model import (
    CoeffGenerator, CoefficientModel, ModelKind, builtin_model,
)
from cohops.models.descriptors import PoincareTable
from cohops.services.classify import (
    conjecture_generators, etale_ops_H1, etale_ops_Hn, motivic_ops_deg1_descent,
    motivic_ops_deg1_zeta,
)
from cohops.services.expression_parser import parse_expr
from cohops.services.motivic import (
    Direction, MotivicClassExpr, convert, normalize_motivic, q_op, specialize_etale, twisted_mul,
    word_bidegree,
)
from cohops.services.steenrod import (
    BETA, AdmissibleSeq, Mode, OpPoly, P, Sq, adem_reduce, admissible_sequences, format_poly,
    format_word, is_admissible_word, sequence_degree, word_degree,
)
from cohops.services.unstable import cartan_generators, iterate_borel, monomial_basis
from cohops.utils.arith import DKind, PrimeContext, binom, d_index, d_to_a, nu
from cohops.utils.exceptions import ValidationError

logger = logging.getLogger(__name__)


@dataclass
class CheckSettings:
    seed: int = 1729
    triples: int = 500
    adem_max_degree: int = 60


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int
    counterexample: Optional[str] = None

    def to_dict(self):
        return {'label': self.name, 'source': None, 'target': None,
                'data': {'passed': self.passed, 'checked': self.checked,
                         'counterexample': self.counterexample}}


class _Tally:
    """Counts checks and remembers the first failure."""

    def __init__(self, name: str):
        self.name = name
        self.checked = 0
        self.failure: Optional[str] = None

    def expect(self, condition: bool, describe: Callable[[], str]) -> bool:
        self.checked += 1
        if not condition and self.failure is None:
            self.failure = describe()
        return condition

    def result(self) -> CheckResult:
        return CheckResult(self.name, self.failure is None, self.checked, self.failure)


ODD_PRIMES = list(primerange(3, 50))


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------

def check_lucas(settings: CheckSettings) -> CheckResult:
    tally = _Tally('lucas')
    contexts = [PrimeContext(ell) for ell in (2, 3, 5, 7)]
    for n in range(0, 201):
        for k in range(-1, n + 2):
            exact = int(binomial(n, k)) if 0 <= k <= n else 0
            for ctx in contexts:
                expected = exact % ctx.ell
                tally.expect(binom(n, k, ctx) == expected,
                             lambda: f"C({n},{k}) mod {ctx.ell}: got {binom(n, k, ctx)}, expected {expected}")
    return tally.result()


def check_wilson(settings: CheckSettings) -> CheckResult:
    tally = _Tally('wilson')
    for ell in ODD_PRIMES:
        ctx = PrimeContext(ell)
        m = (ell - 1) // 2
        square = int(factorial(m)) ** 2 % ell
        tally.expect(square == (-1) ** (m + 1) % ell, lambda: f"(m!)² at ℓ={ell}: got {square}")
        for a in range(0, 101):
            tally.expect(nu(2 * a, ctx) == (-1) ** a,
                         lambda: f"ν_{2 * a} at ℓ={ell}: got {nu(2 * a, ctx)}")
    return tally.result()


def check_d_index(settings: CheckSettings) -> CheckResult:
    tally = _Tally('d_index')
    for ell in (3, 5, 7):
        ctx = PrimeContext(ell)
        for n in range(0, 21):
            for a in range(0, n + 1):
                for kind in DKind:
                    k = d_index(n, a, kind, ctx)
                    tally.expect(d_to_a(n, k, kind, ctx) == a,
                                 lambda: f"d_to_a(d_index({n},{a},{kind.value})) at ℓ={ell}")
    return tally.result()


# ---------------------------------------------------------------------------
# Adem engine
# ---------------------------------------------------------------------------

def _census_expected(ell: int, max_degree: int) -> set:
    ctx = PrimeContext(ell)
    expected = {(0,), (1,)}
    k = 0
    while True:
        powers = [ell ** j for j in range(k, -1, -1)]
        flat = [0]
        for s in powers[:-1]:
            flat += [s, 0]
        flat += [1, 1]
        seq = AdmissibleSeq.from_flat(tuple(flat), ctx) if ctx.is_odd else AdmissibleSeq(
            tuple(flat[0::2]), tuple(flat[1::2]))
        if sequence_degree(seq, ctx) > max_degree:
            return expected
        expected.add(tuple(flat))
        k += 1


def check_census(settings: CheckSettings) -> CheckResult:
    tally = _Tally('census')
    for ell in (2, 3, 5):
        ctx = PrimeContext(ell)
        bound = 2 * ell ** 5 + 2
        found = {seq.flat() for seq in admissible_sequences(bound, ctx, max_excess=1, odd_style=True)}
        expected = _census_expected(ell, bound)
        tally.expect(found == expected,
                     lambda: f"excess<2 census at ℓ={ell}: extra {sorted(found - expected)}, "
                             f"missing {sorted(expected - found)}")
    return tally.result()


def _inadmissible_pairs(ctx: PrimeContext, max_degree: int):
    if not ctx.is_odd:
        for b in range(1, max_degree):
            for a in range(1, min(2 * b, max_degree - b + 1)):
                yield (Sq(a), Sq(b))
        return
    q = ctx.power_degree
    for b in range(1, max_degree // q + 1):
        for a in range(1, max_degree // q - b + 1):
            if a < ctx.ell * b:
                yield (P(a), P(b))
            if a <= ctx.ell * b and q * (a + b) + 1 <= max_degree:
                yield (P(a), BETA, P(b))


def check_adem(settings: CheckSettings) -> CheckResult:
    tally = _Tally('adem')
    for ell in (2, 3, 5):
        ctx = PrimeContext(ell)
        for word in _inadmissible_pairs(ctx, settings.adem_max_degree):
            reduced = adem_reduce(OpPoly.word(ctx, word))
            degree = word_degree(word, ctx)
            text = format_word(word)
            tally.expect(all(is_admissible_word(w, ctx) for w in reduced.words()),
                         lambda: f"{text} at ℓ={ell} reduces to inadmissible {format_poly(reduced)}")
            tally.expect(adem_reduce(reduced) == reduced,
                         lambda: f"reduction of {text} at ℓ={ell} is not idempotent")
            tally.expect(all(word_degree(w, ctx) == degree for w in reduced.words()),
                         lambda: f"reduction of {text} at ℓ={ell} changes degree")
    return tally.result()


def _random_letter(rng: random.Random, ctx: PrimeContext, budget: int):
    if not ctx.is_odd:
        return Sq(rng.randint(1, max(1, budget)))
    if rng.random() < 0.3:
        return BETA
    return P(rng.randint(1, max(1, budget // ctx.power_degree)))


def check_confluence(settings: CheckSettings) -> CheckResult:
    """Left-first, (xy)z and x(yz) reduction orders of random triples agree."""
    tally = _Tally('confluence')
    rng = random.Random(settings.seed)
    primes = (2, 3, 5)
    drawn = 0
    while drawn < settings.triples:
        ctx = PrimeContext(primes[drawn % len(primes)])
        x, y, z = (_random_letter(rng, ctx, 14) for _ in range(3))
        if word_degree((x, y, z), ctx) > 40:
            continue
        drawn += 1
        px, py, pz = (OpPoly.word(ctx, (letter,)) for letter in (x, y, z))
        direct = adem_reduce(px * py * pz)
        left = adem_reduce(adem_reduce(px * py) * pz)
        right = adem_reduce(px * adem_reduce(py * pz))
        text = format_word((x, y, z))
        tally.expect(direct == left == right,
                     lambda: f"{text} at ℓ={ctx.ell}: {format_poly(direct)} | "
                             f"{format_poly(left)} | {format_poly(right)}")
    return tally.result()


def _gf2_rank(rows: List[int]) -> int:
    """Rank over GF(2) of int bitset rows."""
    work = [r for r in rows if r]
    rank = 0
    while work:
        pivot = work.pop()
        rank += 1
        low = pivot & -pivot
        work = [r ^ pivot if r & low else r for r in work]
        work = [r for r in work if r]
    return rank


def check_span(settings: CheckSettings) -> CheckResult:
    """At ℓ=2 the reductions of all Sq-words of degree d span a space of dimension #admissible(d)."""
    tally = _Tally('span')
    ctx = PrimeContext(2)
    max_degree = 16
    spans: Dict[int, List[OpPoly]] = {0: [OpPoly.identity(ctx)]}
    for d in range(1, max_degree + 1):
        candidates = []
        for a in range(1, d + 1):
            for tail in spans[d - a]:
                reduced = adem_reduce(OpPoly.word(ctx, (Sq(a),)) * tail)
                if reduced:
                    candidates.append(reduced)
        index = {w: k for k, w in enumerate(sorted({w for p in candidates for w in p.words()}))}
        rows = [sum(1 << index[w] for w in p.words()) for p in candidates]
        basis = _independent(candidates, rows)
        spans[d] = basis
        expected = sum(1 for seq in admissible_sequences(d, ctx) if sequence_degree(seq, ctx) == d)
        tally.expect(len(basis) == expected,
                     lambda: f"degree {d}: span dimension {len(basis)}, admissible count {expected}")
    return tally.result()


def _independent(polys: List[OpPoly], rows: List[int]) -> List[OpPoly]:
    kept, kept_rows = [], []
    for poly, row in zip(polys, rows):
        if _gf2_rank(kept_rows + [row]) > len(kept_rows):
            kept.append(poly)
            kept_rows.append(row)
    return kept


# ---------------------------------------------------------------------------
# Unstable rings
# ---------------------------------------------------------------------------

def check_borel(settings: CheckSettings) -> CheckResult:
    tally = _Tally('borel')
    for ell in (2, 3):
        ctx = PrimeContext(ell)
        for n in range(2, 6):
            borel = Counter(g.bidegree for g in iterate_borel('K1', n, ctx, Window(30)).generators)
            cartan = Counter(g.bidegree for g in cartan_generators(n, ctx, 30))
            tally.expect(borel == cartan,
                         lambda: f"ℓ={ell}, n={n}: Borel {sorted(borel.elements())} "
                                 f"vs Cartan {sorted(cartan.elements())}")
    return tally.result()


def check_tables(settings: CheckSettings) -> CheckResult:
    """Tensoring with the trivial algebra leaves a table unchanged."""
    tally = _Tally('tables')
    for ell in (2, 3):
        ctx = PrimeContext(ell)
        window = Window(30)
        table = monomial_basis(cartan_generators(2, ctx, 30), window, ctx)
        unit = PoincareTable.unit(window)
        tally.expect(table.tensor(unit).entries == table.entries, lambda: f"unit tensor at ℓ={ell}")
        empty = monomial_basis([], window, ctx)
        tally.expect(empty.entries == {(0, 0): 1}, lambda: f"empty algebra at ℓ={ell}")
    return tally.result()


# ---------------------------------------------------------------------------
# Motivic calculus
# ---------------------------------------------------------------------------

def check_conversion(settings: CheckSettings) -> CheckResult:
    tally = _Tally('conversion')
    for ell in (2, 3, 5):
        ctx = PrimeContext(ell)
        for a in range(31):
            for i in range(31):
                source = Bidegree(max(2 * i, 2 * a), i)
                directions = [d for d, ok in ((Direction.P_TO_PV, a <= i), (Direction.PV_TO_P, a >= i)) if ok]
                for direction in directions:
                    result = convert(a, source, direction, ctx)
                    tally.expect(result.zeta_exponent >= 0,
                                 lambda: f"negative ζ-exponent for a={a} on {source} at ℓ={ell}")
        for n in range(1, 16):
            for i in range(0, n + 1):
                result = convert(n, Bidegree(2 * n, i), Direction.PV_TO_P, ctx)
                tally.expect(result.zeta_exponent == (n - i) * (ell - 1) and result.power_marker,
                             lambda: f"P_V^{n} on ({2 * n},{i}) at ℓ={ell}")
    return tally.result()


def check_q_ops(settings: CheckSettings) -> CheckResult:
    tally = _Tally('q_ops')
    ctx = PrimeContext(3)
    model = builtin_model('alg-closed', ctx)
    for a in range(1, 8):
        expr = q_op(a, Bidegree(20, 2), ctx, model)
        tally.expect(list(expr.terms) == [((), (BETA, P(a)), 1)], lambda: f"Q^{a} ≠ βP^{a}")
    return tally.result()


def _sample_words(ctx: PrimeContext, length: int, frobenius: bool):
    letters = [BETA] + [P(a) for a in range(0 if frobenius else 1, 4)]
    for k in range(1, length + 1):
        yield from itertools.product(letters, repeat=k)


def check_twisted(settings: CheckSettings) -> CheckResult:
    """twisted_mul keeps the bidegree of w(α·x) in every term."""
    tally = _Tally('twisted')
    ctx = PrimeContext(3)
    model = builtin_model('alg-closed', ctx)
    source = Bidegree(30, 2)
    for word in _sample_words(ctx, 2, True):
        for e in range(3):
            alpha = model.monomial('zeta', e)
            expected = word_bidegree(word, source + model.monomial_bidegree(alpha), ctx)
            for (m, w), _ in twisted_mul(alpha, word, ctx, model).items():
                got = model.monomial_bidegree(m) + word_bidegree(w, source, ctx)
                tally.expect(got == expected, lambda: f"zeta^{e} {format_word(word)}: {got} ≠ {expected}")
    return tally.result()


def check_etale(settings: CheckSettings) -> CheckResult:
    """b ↦ 1 on the motivic normal form matches the étale normal form."""
    tally = _Tally('etale')
    ctx = PrimeContext(3)
    model = builtin_model('alg-closed', ctx)
    source = Bidegree(40, 2)
    for word in _sample_words(ctx, 3, True):
        motivic = normalize_motivic(MotivicClassExpr.of_word(model, source, word, Mode.MOTIVIC))
        etale = normalize_motivic(MotivicClassExpr.of_word(model, source, word, Mode.ETALE))
        specialized = specialize_etale(motivic)
        tally.expect(specialized.terms == etale.terms,
                     lambda: f"{format_word(word)}: {specialized.format()} vs {etale.format()}")
    return tally.result()


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def rank_one_etale_model(ctx: PrimeContext) -> CoefficientModel:
    """One class χ in H¹ (twist 0) and one Brauer class in H² (twist 1), χ·br = 0."""
    return CoefficientModel(
        'rank-one', ctx, ModelKind.ETALE,
        (CoeffGenerator('chi', Bidegree(1, 0)), CoeffGenerator('br', Bidegree(2, 1))),
        products={(('chi', 1), ('br', 1)): {}},
        cohomological_dimension=2,
    )


def check_h1_hn(settings: CheckSettings) -> CheckResult:
    tally = _Tally('h1_hn')
    cases = [(PrimeContext(3), 'trivial', 1), (PrimeContext(2), 'real-etale', 1),
             (PrimeContext(3, 2), 'rank-one', 1), (PrimeContext(5, 4), 'trivial', 3)]
    window = Window(10)
    for ctx, name, i in cases:
        model = rank_one_etale_model(ctx) if name == 'rank-one' else builtin_model(name, ctx)
        counts = Counter((op.target.deg, op.target.weight) for op in etale_ops_H1(i, model, window, ctx))
        table = etale_ops_Hn(1, i, model, window, ctx).table
        tally.expect(dict(counts) == table.entries,
                     lambda: f"{name} at ℓ={ctx.ell}: H1 {sorted(counts.items())} vs Hn {table.to_rows()}")
    return tally.result()


def check_descent(settings: CheckSettings) -> CheckResult:
    tally = _Tally('descent')
    ctx = PrimeContext(3, 2)
    ops = motivic_ops_deg1_descent(2, rank_one_etale_model(ctx), Window(4, 3), ctx)
    targets = {(op.target.deg, op.target.weight) for op in ops
               if op.data['c'] != '1' and op.data['eps'] + op.data['m'] == 1}
    expected = {(2, 2), (3, 2), (3, 3), (4, 3)}
    tally.expect(targets == expected, lambda: f"descent targets {sorted(targets)}")
    return tally.result()


def check_zeta_descent(settings: CheckSettings) -> CheckResult:
    tally = _Tally('zeta_descent')
    for ell in (2, 3):
        ctx = PrimeContext(ell)
        model = builtin_model('alg-closed', ctx)
        window = Window(8, 8)
        for i in (1, 2, 3):
            zeta = sorted(op.target for op in motivic_ops_deg1_zeta(i, model, window, ctx))
            descent = sorted(op.target for op in motivic_ops_deg1_descent(i, model, window, ctx))
            tally.expect(zeta == descent, lambda: f"ℓ={ell}, i={i}: {len(zeta)} vs {len(descent)} targets")
    return tally.result()


def check_conjecture(settings: CheckSettings) -> CheckResult:
    tally = _Tally('conjecture')
    for ell, window, label in ((3, Window(80), 'P13 beta PV4 beta PV1 beta'),
                               (2, Window(30), 'Sq14 SqV7 SqV3 SqV1')):
        ctx = PrimeContext(ell)
        labels = {op.label for op in conjecture_generators(4, 2, ctx, window)}
        tally.expect(label in labels, lambda: f"{label} missing at ℓ={ell}")
    ctx = PrimeContext(3)
    cartan = Counter(g.bidegree for g in cartan_generators(4, ctx, 40, weight=2))
    pure = Counter(op.target for op in conjecture_generators(4, 2, ctx, Window(40)) if not op.data['J'])
    tally.expect(cartan == pure, lambda: "J-empty generators differ from the Cartan set")
    return tally.result()


def check_parser(settings: CheckSettings) -> CheckResult:
    tally = _Tally('parser')
    rng = random.Random(settings.seed)
    for ell in (2, 3, 5):
        ctx = PrimeContext(ell)
        for _ in range(100):
            terms = {}
            for _ in range(rng.randint(1, 3)):
                word = tuple(_random_letter(rng, ctx, 12) for _ in range(rng.randint(0, 3)))
                terms[word] = rng.randint(1, ell - 1)
            poly = OpPoly(ctx, terms)
            text = format_poly(poly)
            tally.expect(parse_expr(text, ctx) == poly, lambda: f"round trip of {text!r} at ℓ={ell}")
    return tally.result()


SUITES: Dict[str, Callable[[CheckSettings], CheckResult]] = {
    'lucas': check_lucas,
    'wilson': check_wilson,
    'd_index': check_d_index,
    'census': check_census,
    'adem': check_adem,
    'confluence': check_confluence,
    'span': check_span,
    'borel': check_borel,
    'tables': check_tables,
    'conversion': check_conversion,
    'q_ops': check_q_ops,
    'twisted': check_twisted,
    'etale': check_etale,
    'h1_hn': check_h1_hn,
    'descent': check_descent,
    'zeta_descent': check_zeta_descent,
    'conjecture': check_conjecture,
    'parser': check_parser,
}


def run_checks(names: Optional[List[str]] = None,
               settings: Optional[CheckSettings] = None) -> List[CheckResult]:
    """
    Run the named suites in the given order (all suites, in registry order, when names is empty).

    Raises:
        ValidationError: unknown suite name
    """
    settings = settings or CheckSettings()
    selected = list(names) if names else list(SUITES)
    unknown = [name for name in selected if name not in SUITES]
    if unknown:
        raise ValidationError(f"unknown check suite(s): {', '.join(unknown)}")
    results = []
    for name in selected:
        result = SUITES[name](settings)
        level = logging.INFO if result.passed else logging.ERROR
        logger.log(level, f"check {name}: {'ok' if result.passed else 'FAILED'} ({result.checked} case(s))")
        results.append(result)
    return results


class VerificationRunner:
    """
    Service class for the verification suites.

    Holds one CheckSettings so repeated runs share the seed and sizes.

    Example:
        >>> runner = VerificationRunner(CheckSettings(seed=7))
        >>> results = runner.run(['lucas'])
        >>> runner.report(results)[0].startswith('ok   lucas')
        True
    """

    def __init__(self, settings: Optional[CheckSettings] = None):
        self.settings = settings or CheckSettings()

    def run(self, names: Optional[List[str]] = None) -> List[CheckResult]:
        return run_checks(names, self.settings)

    @staticmethod
    def report(results: List[CheckResult]) -> List[str]:
        """One status line per suite, then the first counterexample if any suite failed."""
        lines = [f"{'ok  ' if r.passed else 'FAIL'} {r.name} ({r.checked} case(s))" for r in results]
        failed = [r for r in results if not r.passed]
        if failed:
            lines.append(f"first counterexample ({failed[0].name}): {failed[0].counterexample}")
        return lines
