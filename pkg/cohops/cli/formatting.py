"""
Text and JSON rendering for CLI results.

Every command produces a list of result rows shaped like
{"label", "source", "target", "data"}. Text mode prints one line per row;
--json wraps the rows in the versioned envelope
{"version": "1", "command", "params", "results"} with sorted keys.
"""

import json
from typing import Any, Dict, Iterable, List, Optional

import click

from cohops.models.bidegree import Bidegree
from cohops.models.descriptors import GeneratorDescriptor, OperationDescriptor, PoincareTable
from cohops.services.steenrod import OpPoly, format_poly, format_word, is_suspension_stable, word_degree

JSON_SCHEMA_VERSION = '1'

Row = Dict[str, Any]


def row(label: str, source: Optional[Bidegree] = None, target: Optional[Bidegree] = None,
        data: Optional[Dict[str, Any]] = None) -> Row:
    return {
        'label': label,
        'source': source.as_list() if source is not None else None,
        'target': target.as_list() if target is not None else None,
        'data': data or {},
    }


def poly_row(poly: OpPoly, source: Optional[Bidegree] = None) -> Row:
    terms = [{'word': format_word(word), 'coefficient': int(coeff),
              'degree': word_degree(word, poly.ctx), 'stable': is_suspension_stable(word)}
             for word, coeff in poly.terms()]
    return row(format_poly(poly), source, data={'mode': poly.mode.value, 'terms': terms})


def generator_row(g: GeneratorDescriptor) -> Row:
    return row(g.signed_label, None, g.bidegree, data=dict(g.to_dict(), base=g.base))


def operation_rows(ops: Iterable[OperationDescriptor]) -> List[Row]:
    return [op.to_dict() for op in ops]


def table_rows(table: PoincareTable) -> List[Row]:
    out = []
    for (deg, weight), dimension in table.items():
        out.append(row(f"H^{{{deg},{weight}}}", target=Bidegree(deg, weight),
                       data={'dimension': dimension}))
    return out


def render_text(rows: List[Row]) -> str:
    lines = []
    for r in rows:
        line = r['label']
        if r['target'] is not None:
            line = f"{line}  ({r['target'][0]},{r['target'][1]})"
        lines.append(line)
    return '\n'.join(lines)


def render_json(command: str, params: Dict[str, Any], rows: List[Row], indent: int) -> str:
    payload = {
        'version': JSON_SCHEMA_VERSION,
        'command': command,
        'params': params,
        'results': rows,
    }
    return json.dumps(payload, sort_keys=True, indent=indent, ensure_ascii=False)


def emit(command: str, params: Dict[str, Any], rows: List[Row], as_json: bool,
         indent: int = 2, text: Optional[str] = None) -> None:
    """Print rows as text (or the given text) or as the JSON envelope."""
    if as_json:
        click.echo(render_json(command, params, rows, indent))
    elif text is not None:
        click.echo(text)
    elif rows:
        click.echo(render_text(rows))
