"""
steenrod - command-line front end

Commands:
    normalize   reduce an operation expression to admissible normal form
    basis       admissible words per degree, or monomials of H*(K_n)
    generators  generators of H*(K_n) (Cartan description or Borel iteration)
    poincare    bigraded dimension table of H*(K_n)
    classify    the classification enumerators
    convert     P ↔ P_V conversion on a source bidegree
    descent     degree-1 operations by Galois descent
    check       built-in verification suites

Exit codes:
    0  success
    1  a `check` suite failed
    2  usage or expression syntax error
    3  any other domain error (message on stderr)

Usage:
    python steenrod.py normalize --l 3 --mode classical "P1 P1"
    python steenrod.py descent --l 3 --d 2 --i 2 --model finite-field.json --max-deg 4 --json
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import click

from cohops import __version__
from cohops.cli.formatting import (
    Row, emit, generator_row, operation_rows, poly_row, render_text, row, table_rows,
)
from cohops.models.bidegree import Bidegree, Window
from cohops.models.coefficient_model import CoefficientModel, load_model
from cohops.models.descriptors import ConjectureOptions, GeneratorDescriptor
from cohops.services.classify import CLASSIFY_KINDS, ClassificationTable, Classifier
from cohops.services.expression_parser import parse_expr
from cohops.services.motivic import (
    Direction, MotivicClassExpr, convert as convert_operation, normalize_motivic,
)
from cohops.services.steenrod import (
    BETA, LetterKind, Mode, OpPoly, adem_reduce, adem_relation, admissible_basis, format_poly,
    format_word, is_admissible_word,
)
from cohops.services.unstable import (
    cartan_generators, enumerate_monomials, iterate_borel, k1_generators, monomial_basis,
)
from cohops.services.verification import SUITES, CheckSettings, VerificationRunner
from cohops.utils.arith import PrimeContext
from cohops.utils.exceptions import CohopsException, ExpressionSyntaxError
from cohops.utils.logging_setup import configure_logging
from config import Config

logger = logging.getLogger(__name__)

# ============================================
# Parameter types
# ============================================

class BidegreeType(click.ParamType):
    """'n,i' on the command line."""
    name = 'n,i'

    def convert(self, value, param, ctx):
        if isinstance(value, Bidegree):
            return value
        try:
            n, i = Config.parse_bidegree(value)
        except CohopsException as e:
            self.fail(str(e), param, ctx)
        return Bidegree(n, i)


class WindowType(click.ParamType):
    """'D' or 'D,W' on the command line."""
    name = 'D[,W]'

    def convert(self, value, param, ctx):
        if isinstance(value, Window):
            return value
        try:
            max_degree, max_weight = Config.parse_window(value)
        except CohopsException as e:
            self.fail(str(e), param, ctx)
        return Window(max_degree, max_weight)


class SpaceType(click.ParamType):
    """'K<n>' naming the Eilenberg–MacLane space K(Z/ℓ(i), n)."""
    name = 'Kn'

    def convert(self, value, param, ctx):
        if isinstance(value, int):
            return value
        text = str(value)
        if not (text[:1] in ('K', 'k') and text[1:].isdigit() and int(text[1:]) >= 1):
            self.fail(f"expected K<n> with n ≥ 1, got {value!r}", param, ctx)
        return int(text[1:])


BIDEGREE = BidegreeType()
WINDOW = WindowType()
SPACE = SpaceType()


# ============================================
# Error handling
# ============================================

class CohopsGroup(click.Group):
    """Maps library exceptions onto exit codes."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ExpressionSyntaxError as e:
            logger.error(f"Syntax error: {e}")
            click.echo(f"Error: {e}", err=True)
            ctx.exit(2)
        except CohopsException as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(f"Error: {e}", err=True)
            ctx.exit(3)


# ============================================
# Shared options
# ============================================

def _apply(func, options):
    for option in reversed(options):
        func = option(func)
    return func


def output_options(func):
    return _apply(func, [
        click.option('--json', 'as_json', is_flag=True, help='Emit the versioned JSON envelope'),
        click.option('--verbose', '-v', is_flag=True, help='Debug logging on stderr'),
        click.option('--quiet', '-q', is_flag=True, help='Errors only on stderr'),
    ])


def context_options(func):
    return _apply(func, [
        click.option('--l', 'ell', type=int, default=lambda: Config.DEFAULT_ELL,
                     show_default='COHOPS_DEFAULT_ELL', help='Prime ℓ'),
        click.option('--d', 'd', type=int, default=lambda: Config.DEFAULT_D,
                     show_default='COHOPS_DEFAULT_D', help='Twist period d, dividing ℓ−1'),
        click.option('--mode', type=click.Choice([m.value for m in Mode]),
                     default=lambda: Config.DEFAULT_MODE, show_default='COHOPS_DEFAULT_MODE'),
        click.option('--max-deg', type=int, default=lambda: Config.MAX_DEGREE,
                     show_default='COHOPS_MAX_DEGREE', help='Degree window'),
        click.option('--max-wt', type=int, default=lambda: Config.MAX_WEIGHT,
                     help='Weight window (unbounded by default)'),
        click.option('--window', type=WINDOW, default=None,
                     help='Shorthand D or D,W overriding --max-deg and --max-wt'),
        click.option('--model', 'model_name', default='trivial', show_default=True,
                     help='Coefficient model: file path, name under COHOPS_MODELS_DIR, or built-in'),
    ])


@dataclass
class Session:
    """Per-invocation state built from the shared options."""
    ctx: PrimeContext
    mode: Mode
    window: Window
    model_name: str
    as_json: bool
    _model: Optional[CoefficientModel] = None

    @classmethod
    def start(cls, ell: int, d: int, mode: str, max_deg: int, max_wt: Optional[int],
              window: Optional[Window], model_name: str, as_json: bool, verbose: bool,
              quiet: bool) -> 'Session':
        _configure(verbose, quiet)
        window = window or Window(max_deg, max_wt)
        return cls(PrimeContext(ell, d), Mode(mode), window, model_name, as_json)

    @property
    def model(self) -> CoefficientModel:
        if self._model is None:
            self._model = load_model(self.model_name, self.ctx, Config.MODELS_DIR)
        return self._model

    def params(self, **extra) -> Dict[str, Any]:
        params = {
            'l': self.ctx.ell, 'd': self.ctx.d, 'mode': self.mode.value,
            'max_deg': self.window.max_degree, 'max_wt': self.window.max_weight,
            'model': self.model_name,
        }
        params.update({k: _jsonable(v) for k, v in extra.items()})
        return params

    def emit(self, command: str, rows: List[Row], text: Optional[str] = None, **extra) -> None:
        emit(command, self.params(**extra), rows, self.as_json, Config.JSON_INDENT, text)


def _configure(verbose: bool, quiet: bool) -> None:
    if verbose:
        level = 'DEBUG'
    elif quiet:
        level = 'ERROR'
    else:
        level = Config.LOG_LEVEL
    configure_logging(level, Config.LOG_FORMAT)


def _describe_window(window: Window) -> str:
    text = f"degree ≤ {window.max_degree}"
    return text if window.max_weight is None else f"{text}, weight ≤ {window.max_weight}"


def _jsonable(value):
    if isinstance(value, Bidegree):
        return value.as_list()
    if isinstance(value, Window):
        return [value.max_degree, value.max_weight]
    if isinstance(value, tuple):
        return list(value)
    return value


# ============================================
# Command group
# ============================================

@click.group(cls=CohopsGroup)
@click.version_option(__version__, prog_name='steenrod')
def cli():
    """Symbolic mod-ℓ cohomology operations (Steenrod, étale, motivic)."""


# ============================================
# normalize
# ============================================

def _single_relation(poly: OpPoly, ctx: PrimeContext) -> Optional[OpPoly]:
    """Adem relation for a lone two-letter inadmissible word, else None."""
    if len(poly) != 1:
        return None
    word = poly.words()[0]
    if is_admissible_word(word, ctx):
        return None
    power = LetterKind.P if ctx.is_odd else LetterKind.SQ
    if len(word) == 2 and all(letter.kind is power for letter in word):
        return adem_relation(word[0].n, word[1].n, ctx, mode=poly.mode)
    if len(word) == 3 and ctx.is_odd and word[1] == BETA and word[0].kind is power and word[2].kind is power:
        return adem_relation(word[0].n, word[2].n, ctx, bockstein=True, mode=poly.mode)
    return None


@cli.command()
@click.argument('expression')
@click.option('--source', type=BIDEGREE, default=None, help='Source bidegree n,i of the class x')
@click.option('--explain', is_flag=True, help='Show the Adem relation used for a two-letter word')
@context_options
@output_options
def normalize(expression, source, explain, **options):
    """Reduce EXPRESSION to admissible normal form."""
    session = Session.start(**options)
    parsed = parse_expr(expression, session.ctx, session.mode, model=session.model, source=source)

    if isinstance(parsed, MotivicClassExpr):
        result = normalize_motivic(parsed)
        logger.info(f"normalize: {len(result.terms)} term(s) on {source}")
        session.emit('normalize', [result.to_dict()], result.format(), expression=expression, source=source)
        return

    reduced = adem_reduce(parsed)
    out = poly_row(reduced)
    text = format_poly(reduced)
    relation = _single_relation(parsed, session.ctx) if explain else None
    if relation is not None:
        word_text = format_word(parsed.words()[0])
        out['data']['relation'] = f"{word_text} = {format_poly(relation)}"
        text = f"Adem: {out['data']['relation']}\n{text}"
    session.emit('normalize', [out], text, expression=expression, source=source)


# ============================================
# basis / generators / poincare
# ============================================

def _space_generators(session: Session, n: int, method: str, base: str,
                      weight: int) -> Tuple[List[GeneratorDescriptor], Optional[Window]]:
    """Generators of H*(K_n) in the window, plus the Borel safe window when iterated."""
    ctx, window = session.ctx, session.window
    if method == 'cartan':
        gens = cartan_generators(n, ctx, window.max_degree, weight)
        return [g for g in gens if window.contains(g.bidegree)], None
    if n == 1:
        return [g for g in k1_generators(ctx, weight) if window.contains(g.bidegree)], window
    result = iterate_borel(base, n, ctx, window, weight)
    return result.generators, result.safe_window


def _generator_options(func):
    return _apply(func, [
        click.option('--space', type=SPACE, default='K1', show_default=True, help='K<n>'),
        click.option('--method', type=click.Choice(['cartan', 'borel']), default='cartan', show_default=True),
        click.option('--base', type=click.Choice(['K1', 'K2']), default='K1', show_default=True,
                     help='Starting space for --method borel'),
        click.option('--weight', type=int, default=1, show_default=True, help='Weight i of ι_n'),
    ])


@cli.command()
@click.option('--degree', type=int, default=None, help='Single internal degree (default: every degree in the window)')
@click.option('--monomials', is_flag=True, help='List the monomials of H*(K_n) instead')
@_generator_options
@context_options
@output_options
def basis(degree, monomials, space, method, base, weight, **options):
    """Admissible basis per degree, or the monomial basis of H*(K_n)."""
    session = Session.start(**options)
    if monomials:
        gens, _ = _space_generators(session, space, method, base, weight)
        listing = enumerate_monomials(gens, session.window)
        rows = [row(str(m), target=m.bidegree) for m in listing]
        logger.info(f"basis: {len(rows)} monomial(s) of H*(K_{space})")
        session.emit('basis', rows, space=f"K{space}", monomials=True)
        return

    degrees = [degree] if degree is not None else list(range(0, session.window.max_degree + 1))
    rows, lines = [], []
    for deg in degrees:
        words = admissible_basis(deg, session.ctx)
        rows.extend(row(format_word(w), data={'degree': deg}) for w in words)
        if words:
            lines.append(f"{deg}: {', '.join(format_word(w) for w in words)}")
    session.emit('basis', rows, '\n'.join(lines), degree=degree)


@cli.command()
@_generator_options
@context_options
@output_options
def generators(space, method, base, weight, **options):
    """Generators of H*(K_n) with their bidegrees."""
    session = Session.start(**options)
    gens, safe = _space_generators(session, space, method, base, weight)
    logger.info(f"generators: {len(gens)} for K_{space} ({method})")
    rows = [generator_row(g) for g in gens]
    extra = {}
    text = None
    if safe is not None:
        extra['safe_window'] = safe
        text = render_text(rows) + f"\nsafe window: {_describe_window(safe)}"
    session.emit('generators', rows, text, space=f"K{space}", method=method, weight=weight, **extra)


@cli.command()
@click.option('--reduced', is_flag=True, help='Drop the unit')
@_generator_options
@context_options
@output_options
def poincare(reduced, space, method, base, weight, **options):
    """Bigraded dimension table of H*(K_n)."""
    session = Session.start(**options)
    gens, _ = _space_generators(session, space, method, base, weight)
    table = monomial_basis(gens, session.window, session.ctx, reduced=reduced)
    text = '\n'.join(f"({deg},{wt}): {dim}" for (deg, wt), dim in table.items())
    session.emit('poincare', table_rows(table), text, space=f"K{space}", method=method, weight=weight)


# ============================================
# classify
# ============================================

def _table_output(result: ClassificationTable):
    rows = [generator_row(g) for g in result.generators] + table_rows(result.table)
    rows += [row(relation, data={'relation': True}) for relation in result.relations]
    lines = ['generators:'] + [f"  {g.signed_label}  ({g.degree},{g.weight})" for g in result.generators]
    lines += ['table:'] + [f"  ({deg},{wt}): {dim}" for (deg, wt), dim in result.table.items()]
    if result.relations:
        lines += ['relations:'] + [f"  {relation}" for relation in result.relations]
    return rows, '\n'.join(lines)


@cli.command()
@click.option('--kind', type=click.Choice(CLASSIFY_KINDS), required=True)
@click.option('--n', 'n', type=int, default=1, show_default=True, help='Source degree n')
@click.option('--i', 'i', type=int, default=1, show_default=True, help='Source weight (twist) i')
@click.option('--include-constants/--no-include-constants', default=None,
              help='Keep the operations c·1 with no x factor')
@click.option('--show-excluded', is_flag=True, help='Also list conjecture candidates removed by the weight filter')
@click.option('--strict-b', is_flag=True, help="Use '<' in the P_V weight condition")
@click.option('--excess-threshold', type=int, default=None, help='Excess bound (default: n)')
@context_options
@output_options
def classify(kind, n, i, include_constants, show_excluded, strict_b, excess_threshold, **options):
    """Run one of the classification enumerators."""
    session = Session.start(**options)
    classifier = Classifier(session.model, session.window, session.ctx)
    opts = ConjectureOptions(excess_threshold=excess_threshold, strict_b=strict_b)
    result = classifier.run(kind, n, i, include_constants, opts)
    text = None

    if isinstance(result, ClassificationTable):
        rows, text = _table_output(result)
    else:
        rows = operation_rows(result)
    if kind == 'conjecture' and show_excluded:
        excluded = operation_rows(classifier.excluded(n, i, opts))
        for r in excluded:
            r['data']['excluded'] = True
        rows += excluded

    logger.info(f"classify {kind}: {len(rows)} row(s)")
    session.emit('classify', rows, text, kind=kind, n=n, i=i,
                 strict_b=strict_b, excess_threshold=excess_threshold)


# ============================================
# convert / descent
# ============================================

@cli.command()
@click.option('--a', 'a', type=int, required=True, help='Operation index a')
@click.option('--source', type=BIDEGREE, required=True, help='Source bidegree n,i')
@click.option('--direction', type=click.Choice([d.value for d in Direction]),
              default=Direction.P_TO_PV.value, show_default=True)
@context_options
@output_options
def convert(a, source, direction, **options):
    """Rewrite P^a as a ζ-multiple of P_V^a on H^{n,i}, or back."""
    session = Session.start(**options)
    result = convert_operation(a, source, Direction(direction), session.ctx)
    session.emit('convert', [result.to_dict()], result.label, a=a, source=source, direction=direction)


@cli.command()
@click.option('--i', 'i', type=int, required=True, help='Source weight i of H^{1,i}')
@click.option('--include-constants/--no-include-constants', default=True, show_default=True)
@context_options
@output_options
def descent(i, include_constants, **options):
    """Degree-1 operations on H^{1,i} computed by Galois descent."""
    session = Session.start(**options)
    ops = Classifier(session.model, session.window, session.ctx).run(
        'deg1-descent', i=i, include_constants=include_constants)
    logger.info(f"descent: {len(ops)} operation(s) from H^{{1,{i}}}")
    session.emit('descent', operation_rows(ops), i=i)


# ============================================
# check
# ============================================

@cli.command()
@click.option('--suite', 'suites', multiple=True, type=click.Choice(list(SUITES)),
              help='Suite to run (repeatable; default: all)')
@click.option('--show-config', is_flag=True, help='Print the effective configuration first')
@output_options
@click.pass_context
def check(click_ctx, suites, show_config, as_json, verbose, quiet):
    """Run the built-in verification suites; exit 1 on any failure."""
    _configure(verbose, quiet)
    settings = CheckSettings(seed=Config.CHECK_SEED, triples=Config.CHECK_TRIPLES,
                             adem_max_degree=Config.ADEM_CHECK_MAX_DEGREE)
    runner = VerificationRunner(settings)
    results = runner.run(list(suites))
    rows = [r.to_dict() for r in results]
    params = {'suites': list(suites) or list(SUITES)}
    if show_config:
        params['config'] = Config.get_config_dict()

    lines = []
    if show_config and not as_json:
        lines += [f"{key}: {value}" for key, value in sorted(Config.get_config_dict().items())]
    lines += runner.report(results)
    failed = [r for r in results if not r.passed]
    emit('check', params, rows, as_json, Config.JSON_INDENT, '\n'.join(lines))
    if failed:
        click_ctx.exit(1)
