"""
CSS and triorthogonal code construction.

Builds the triorthogonal code of a generator matrix G, verifies
triorthogonality and X-transversality, generates symmetric CSS(C, C)
companions, computes distances and reads and writes code bundles.
"""
import logging
import os
import re
from functools import lru_cache
from itertools import combinations

import numpy as np

from src.errors import (
    NoExtension, NotTriorthogonal, OddDeficiency, ParseError, RankDeficient,
)
from src.models.bitmatrix import BitMatrix, BitVector
from src.models.code import CodeParameters, CssCode, TriorthogonalCode
from src.services import gf2core
from src.services.gf2core import min_coset_weight  # noqa: F401  (public API)

logger = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'data')

_SECTION = re.compile(r'^\[([A-Za-z]+)\]$')
_SECTIONS = ('G', 'HX', 'HZ', 'LX', 'LZ')


def triorthogonality_violations(g):
    """Row pairs and triples whose overlap is odd, as 1-indexed row tuples."""
    bits = g.bits.astype(np.int64)
    overlaps = bits @ bits.T
    pairs = [(a + 1, b + 1) for a, b in combinations(range(g.rows), 2) if overlaps[a, b] % 2]
    triples = [
        (a + 1, b + 1, c + 1)
        for a, b, c in combinations(range(g.rows), 3)
        if int((bits[a] & bits[b] & bits[c]).sum()) % 2
    ]
    return {'pairs': pairs, 'triples': triples}


def is_triorthogonal(g):
    violations = triorthogonality_violations(g)
    return not violations['pairs'] and not violations['triples']


def _split_rows(g):
    weights = g.weights()
    odd = [g.row(i) for i, w in enumerate(weights) if w % 2]
    even = [g.row(i) for i, w in enumerate(weights) if not w % 2]
    return BitMatrix.from_rows(odd, cols=g.cols), BitMatrix.from_rows(even, cols=g.cols)


def paired_representatives(space, partners, key=gf2core.lex_key, limit=None):
    """For each partner row i, the minimum-weight vector of span(space) whose
    inner products with the partner rows form the i-th unit vector."""
    k = partners.rows
    if k == 0:
        return BitMatrix.zeros(0, space.cols)
    elements = gf2core.span_elements(space, limit)
    pattern = (elements.astype(np.int64) @ partners.bits.T.astype(np.int64)) & 1
    rows = []
    for i in range(k):
        target = np.zeros(k, dtype=np.int64)
        target[i] = 1
        hits = elements[(pattern == target).all(axis=1)]
        if hits.shape[0] == 0:
            raise RankDeficient(f'no partner for logical row {i + 1}')
        weights = hits.sum(axis=1)
        rows.append(min(hits[weights == weights.min()], key=key))
    return BitMatrix.from_rows(rows, cols=space.cols)


def build_triorthogonal_code(g, name='qt'):
    if not is_triorthogonal(g):
        raise NotTriorthogonal('matrix violates the pair or triple overlap conditions',
                               **triorthogonality_violations(g))
    if gf2core.rank(g) != g.rows:
        raise RankDeficient(f'G has rank {gf2core.rank(g)} < {g.rows} rows')
    g1, g0 = _split_rows(g)
    hx = gf2core.basis(g0) if g0.rows else BitMatrix.zeros(0, g.cols)
    hz = gf2core.dual_basis(g)
    c2 = gf2core.dual_basis(g0) if g0.rows else BitMatrix.identity(g.cols)
    logical_z = paired_representatives(c2, g1)
    base = CssCode(
        n=g.cols, k=g1.rows, hx=hx, hz=hz,
        logical_x=g1, logical_z=logical_z, mapping_a=g1, name=name,
    ).validate()
    logger.info('built triorthogonal code [[%d,%d]] with m=%d', base.n, base.k, g0.rows)
    return TriorthogonalCode(base=base, g=g, g1=g1, g0=g0, m=g0.rows)


def is_x_transversal(qt):
    """All-ones lies in span(G) and equals the sum of the G1 rows modulo span(G0)."""
    ones = BitVector(np.ones(qt.n, dtype=np.uint8))
    if not gf2core.in_span(qt.g, ones):
        return False
    residue = ones
    for row in qt.g1:
        residue = residue + row
    return gf2core.in_span(qt.g0, residue)


def _symmetric_code(qt, extension, name):
    gens = gf2core.basis(BitMatrix.vstack(qt.g0, extension))
    logical = BitMatrix.from_rows(
        [gf2core.min_weight_representative(row, gens) for row in qt.g1], cols=qt.n)
    return CssCode(
        n=qt.n, k=qt.k, hx=gens, hz=gens,
        logical_x=logical, logical_z=logical, mapping_a=logical, name=name,
    ).validate()


def generate_symmetric_codes(qt, limit, r=None, budget=None):
    """Symmetric CSS(C, C) companions with C = span([G; B]); the first one is canonical."""
    from src.services import transversal

    n, k, m = qt.n, qt.k, gf2core.rank(qt.g0) if qt.g0.rows else 0
    if (n - k) % 2:
        raise OddDeficiency(f'n - k = {n - k} is odd')
    if r is None:
        r = (n - k - 2 * m) // 2
    if r < 0:
        raise NoExtension(f'no room for an extension: n - k - 2m = {n - k - 2 * m}')

    candidates = gf2core.quotient_basis(gf2core.dual_basis(qt.g), qt.g0)
    extensions = gf2core.find_self_orthogonal_extensions(qt.g0, candidates, r, limit, budget)
    codes = []
    for index, extension in enumerate(extensions):
        name = 'qsym' if index == 0 else f'qsym-{index}'
        code = _symmetric_code(qt, extension, name)
        if not transversal.check_cnot(qt.base, code):
            logger.warning('extension %d rejected: CNOT condition fails', index)
            continue
        if not transversal.check_cz_sufficient(code, qt.base):
            logger.warning('extension %d rejected: CZ condition fails', index)
            continue
        codes.append(code)
    if not codes:
        raise NoExtension('no extension yields a transversal pair')
    logger.info('generated %d symmetric companion code(s)', len(codes))
    return codes


def logical_operators(hx, hz, limit=None):
    """Minimum-weight logical X representatives of C1 / span(hx) and their Z partners."""
    n = hx.cols
    c1 = gf2core.dual_basis(hz) if hz.rows else BitMatrix.identity(n)
    c2 = gf2core.dual_basis(hx) if hx.rows else BitMatrix.identity(n)
    directions = gf2core.quotient_basis(c1, hx)
    if hx.rows:
        logical_x = BitMatrix.from_rows(
            [gf2core.min_weight_representative(row, hx, limit=limit) for row in directions],
            cols=n)
    else:
        logical_x = directions
    logical_z = paired_representatives(c2, logical_x, limit=limit)
    return logical_x, logical_z


def code_parameters(code, limit=None):
    dx = min_coset_weight(code.c1, code.hx, limit)
    dz = min_coset_weight(code.c2, code.hz, limit)
    return CodeParameters(n=code.n, k=code.k, d=min(dx, dz), dx=dx, dz=dz)


def _split_sections(text):
    sections, current = {}, None
    loose = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        header = _SECTION.match(line)
        if header:
            current = header.group(1).upper()
            if current not in _SECTIONS:
                raise ParseError(f'line {lineno}: unknown section [{current}]', line=lineno)
            if current in sections:
                raise ParseError(f'line {lineno}: duplicate section [{current}]', line=lineno)
            sections[current] = []
        elif current is None:
            loose.append(line)
        else:
            sections[current].append(line)
    if loose and sections:
        raise ParseError('matrix rows found before the first section header')
    if loose:
        sections['G'] = loose
    return sections


def load_bundle(text, name=None):
    """Parse a code bundle: a [G] block (or a bare matrix) or [HX]/[HZ] with optional [LX]/[LZ]."""
    sections = _split_sections(text)
    if not sections:
        raise ParseError('bundle contains no matrices')
    if 'G' in sections:
        if set(sections) - {'G'}:
            raise ParseError('[G] cannot be combined with other sections')
        return build_triorthogonal_code(BitMatrix.parse('\n'.join(sections['G'])), name or 'qt')
    if 'HX' not in sections or 'HZ' not in sections:
        raise ParseError('bundle needs [G] or both [HX] and [HZ]')

    widths = {len(rows[0]) for rows in sections.values() if rows}
    if len(widths) != 1:
        raise ParseError(f'sections disagree on the qubit count: {sorted(widths)}')
    n = widths.pop()

    def matrix(label):
        rows = sections.get(label) or []
        return BitMatrix.parse('\n'.join(rows)) if rows else BitMatrix.zeros(0, n)

    hx, hz = matrix('HX'), matrix('HZ')
    if 'LX' in sections and 'LZ' in sections:
        logical_x, logical_z = matrix('LX'), matrix('LZ')
    else:
        logical_x, logical_z = logical_operators(hx, hz)
        if 'LX' in sections:
            logical_x = matrix('LX')
            logical_z = paired_representatives(
                gf2core.dual_basis(hx) if hx.rows else BitMatrix.identity(n), logical_x)
        elif 'LZ' in sections:
            logical_z = matrix('LZ')
            logical_x = paired_representatives(
                gf2core.dual_basis(hz) if hz.rows else BitMatrix.identity(n), logical_z)
    code = CssCode(
        n=n, k=n - gf2core.rank(hx) - gf2core.rank(hz), hx=hx, hz=hz,
        logical_x=logical_x, logical_z=logical_z, mapping_a=logical_x, name=name or 'code',
    )
    return code.validate()


def format_bundle(code):
    if isinstance(code, TriorthogonalCode):
        return f'[G]\n{code.g.to_text()}\n'
    parts = []
    for label, m in (('HX', code.hx), ('HZ', code.hz),
                     ('LX', code.logical_x), ('LZ', code.logical_z)):
        parts.append(f'[{label}]')
        if m.rows:
            parts.append(m.to_text())
    return '\n'.join(parts) + '\n'


def read_bundle(path, name=None):
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f'cannot read {path}: {e.strerror}')
    return load_bundle(text, name)


@lru_cache(maxsize=None)
def example_15():
    """The 15-qubit T-triorthogonal code shipped in src/data."""
    return read_bundle(os.path.join(DATA_DIR, 'example15.g'), 'qt')


@lru_cache(maxsize=None)
def example_pair():
    qt = example_15()
    return qt, generate_symmetric_codes(qt, limit=1)[0]
