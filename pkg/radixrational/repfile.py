"""
Representation files, report JSON and CSV outputs.

A representation file is a JSON document:

    {"radix": 2, "dim": 2, "scalar": "rational",
     "L": [1, 1], "A": [[[1, 1], [0, 0]], [[0, 0], [1, -1]]], "C": [1, 0],
     "eigen_hints": [...], "name": "..."}

Rational entries are integers or "p/q" strings; complex entries are
[re, im] pairs.
"""
import csv
import enum
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
from django.core.serializers.json import DjangoJSONEncoder

from .exactnum import COMPLEX, DOMAINS, RATIONAL, format_scalar, parse_scalar
from .exceptions import ExpansionFileError, NonFiniteError, RepresentationError
from .linrep import LinearRep

REQUIRED_KEYS = ('radix', 'dim', 'scalar', 'L', 'A', 'C')


class ReportEncoder(DjangoJSONEncoder):
    """JSON encoder for rationals, complex numbers, numpy values and enums"""

    def default(self, o):
        if isinstance(o, Fraction):
            return format_scalar(o)
        if isinstance(o, complex):
            return [o.real, o.imag]
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.complexfloating):
            return [float(o.real), float(o.imag)]
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, enum.Enum):
            return o.value
        return super().default(o)


def dumps(document):
    """Deterministic JSON: sorted keys, two-space indent, no NaN"""
    try:
        return json.dumps(document, cls=ReportEncoder, indent=2, sort_keys=True, allow_nan=False)
    except ValueError as exc:
        raise NonFiniteError(str(exc)) from exc


# Representation files

def _entry(value, scalar, location):
    if scalar == RATIONAL:
        if isinstance(value, (float, list, bool)):
            raise RepresentationError(f"rational entry must be an integer or 'p/q' string, got {value!r}", location)
    try:
        return parse_scalar(value, scalar)
    except (ValueError, ZeroDivisionError) as exc:
        raise RepresentationError(f"bad entry {value!r}: {exc}", location) from exc


def _vector(values, dim, scalar, name):
    if not isinstance(values, list) or len(values) != dim:
        raise RepresentationError(f"{name} must be a list of {dim} entries", name)
    return [_entry(v, scalar, f"{name}[{i}]") for i, v in enumerate(values)]


def parse_repfile(document):
    """Build a LinearRep from a decoded representation file"""
    if not isinstance(document, dict):
        raise RepresentationError("representation file must hold a JSON object")
    missing = [key for key in REQUIRED_KEYS if key not in document]
    if missing:
        raise RepresentationError(f"missing keys: {', '.join(missing)}")
    radix, dim, scalar = document['radix'], document['dim'], document['scalar']
    if not isinstance(radix, int) or radix < 2:
        raise RepresentationError(f"radix must be an integer >= 2, got {radix!r}", 'radix')
    if not isinstance(dim, int) or dim < 1:
        raise RepresentationError(f"dim must be a positive integer, got {dim!r}", 'dim')
    if scalar not in DOMAINS:
        raise RepresentationError(f"scalar must be one of {DOMAINS}, got {scalar!r}", 'scalar')
    matrices = document['A']
    if not isinstance(matrices, list) or len(matrices) != radix:
        raise RepresentationError(f"A must list {radix} matrices", 'A')
    A = []
    for r, matrix in enumerate(matrices):
        if not isinstance(matrix, list) or len(matrix) != dim:
            raise RepresentationError(f"A[{r}] must have {dim} rows", f"A[{r}]")
        rows = []
        for i, row in enumerate(matrix):
            if not isinstance(row, list) or len(row) != dim:
                raise RepresentationError(f"row {i} of A[{r}] must have {dim} entries", f"A[{r}] row {i}")
            rows.append([_entry(v, scalar, f"A[{r}] row {i}") for v in row])
        A.append(rows)
    L = _vector(document['L'], dim, scalar, 'L')
    C = _vector(document['C'], dim, scalar, 'C')
    hints = [_entry(h, COMPLEX, 'eigen_hints') for h in document.get('eigen_hints', [])]
    return LinearRep.build(radix, L, A, C, name=document.get('name', ''), eigen_hints=hints, domain=scalar)


def load_repfile(path):
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding='utf-8'))
    except OSError as exc:
        raise RepresentationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise RepresentationError(f"invalid JSON in {path}: line {exc.lineno}", f"line {exc.lineno}") from exc
    return parse_repfile(document)


def repfile_document(rep):
    document = {
        'radix': rep.radix,
        'dim': rep.dim,
        'scalar': rep.domain,
        'L': [format_scalar(v) for v in rep.L.flat()],
        'A': [[[format_scalar(v) for v in row] for row in m.entries] for m in rep.A],
        'C': [format_scalar(v) for v in rep.C.flat()],
    }
    if rep.eigen_hints:
        document['eigen_hints'] = [format_scalar(h) for h in rep.eigen_hints]
    if rep.name:
        document['name'] = rep.name
    return document


def dump_repfile(rep, path=None):
    """The representation file text; also written to path when given"""
    text = dumps(repfile_document(rep)) + '\n'
    if path is not None:
        Path(path).write_text(text, encoding='utf-8')
    return text


# Expansion reports

def load_expansion_report(path):
    try:
        document = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, json.JSONDecodeError) as exc:
        raise ExpansionFileError(f"cannot read expansion file {path}: {exc}") from exc
    if not isinstance(document, dict) or 'terms' not in document or 'error' not in document:
        raise ExpansionFileError(f"{path} is not an expansion report")
    return document


def check_expansion_report(document, expansion, tol=1e-9):
    """Raise ExpansionFileError unless the stored terms match the recomputed expansion"""
    terms = document.get('terms')
    if not isinstance(terms, list) or len(terms) != len(expansion.terms):
        raise ExpansionFileError("expansion file lists a different number of terms")
    for stored, term in zip(terms, expansion.terms):
        try:
            rho, ell, chain = float(stored['rho']), int(stored['ell']), int(stored['chain'])
        except (KeyError, TypeError, ValueError) as exc:
            raise ExpansionFileError(f"malformed term entry {stored!r}") from exc
        if abs(rho - term.rho) > tol * max(1.0, term.rho) or ell != term.level or chain != term.chain:
            raise ExpansionFileError(f"term {stored!r} does not match the representation")
    if document.get('mode') not in (None, expansion.mode):
        raise ExpansionFileError(f"expansion file is for mode {document.get('mode')!r}")


# CSV

def _cell(value):
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise NonFiniteError(f"non-finite value {value!r}")
        return format(float(value), '.17g')
    if isinstance(value, Fraction):
        return str(value)
    return value


def write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def _split_complex(values):
    cells = []
    for v in values:
        z = complex(v)
        cells += [z.real, z.imag]
    return cells


def grid_rows(grid):
    """x followed by re/im of every entry of F(x), row-major per column"""
    for x, value in zip(grid.x, grid.values):
        yield [x] + _split_complex(value.T.reshape(-1))


def grid_header(grid):
    d, nu = grid.values.shape[1:]
    header = ['x']
    for j in range(nu):
        for i in range(d):
            header += [f"F{j}_{i}_re", f"F{j}_{i}_im"]
    return header


def write_grid_csv(path, grid):
    return write_csv(path, grid_header(grid), grid_rows(grid))


def write_profile_csv(path, profile):
    d = profile.values.shape[1]
    header = ['t', 'value_re', 'value_im'] + [f"phi{i}_{part}" for i in range(d) for part in ('re', 'im')]
    rows = (
        [t] + _split_complex([scalar]) + _split_complex(vector)
        for t, scalar, vector in zip(profile.t, profile.scalar, profile.values)
    )
    return write_csv(path, header, rows)


def write_scatter_csv(path, scatter):
    header = ['N', 't', 'residual_re', 'residual_im', 'theory_re', 'theory_im']
    return write_csv(path, header, scatter.rows())


def write_comparison_csv(path, report):
    return write_csv(path, ['point', 'deviation', 'envelope', 'ratio'], report.rows())
