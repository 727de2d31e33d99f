"""
Transversality predicates for CSS code pairs.

Logical bases of the two codes are identified index-wise: logical row i of
one code corresponds to logical row i of the other.
"""
import logging
from itertools import product

import numpy as np

from src.errors import DimensionMismatch, TooLarge
from src.models.bitmatrix import BitMatrix
from src.models.reports import PairReport
from src.services import gf2core

logger = logging.getLogger(__name__)


def _require_same_shape(a, b):
    if a.n != b.n or a.k != b.k:
        raise DimensionMismatch(f'[[{a.n},{a.k}]] vs [[{b.n},{b.k}]]')


def _outside(big, small):
    """Rows of small that are not in span(big), as supports."""
    return [list(row.support) for row in small if not gf2core.in_span(big, row)]


def _orthogonal_violations(rows, checks):
    if rows.rows == 0 or checks.rows == 0:
        return []
    prod = rows @ checks.T
    return [list(rows.row(i).support) for i in range(rows.rows) if prod.bits[i].any()]


def cnot_witnesses(control, target):
    _require_same_shape(control, target)
    witnesses = []
    bad = _outside(target.hx, control.hx)
    if bad:
        witnesses.append({'condition': 'x_stabilizers_contained', 'vectors': bad})
    bad = _outside(control.hz, target.hz)
    if bad:
        witnesses.append({'condition': 'z_stabilizers_contained', 'vectors': bad})

    bad = _orthogonal_violations(control.logical_x, target.hz)
    for i in range(control.k):
        diff = control.logical_x.row(i) + target.logical_x.row(i)
        if not gf2core.in_span(target.hx, diff):
            bad.append(list(control.logical_x.row(i).support))
    if bad:
        witnesses.append({'condition': 'logical_x_identified', 'vectors': bad})

    bad = _orthogonal_violations(target.logical_z, control.hx)
    for i in range(target.k):
        diff = target.logical_z.row(i) + control.logical_z.row(i)
        if not gf2core.in_span(control.hz, diff):
            bad.append(list(target.logical_z.row(i).support))
    if bad:
        witnesses.append({'condition': 'logical_z_identified', 'vectors': bad})
    return witnesses


def check_cnot(control, target):
    """Transversal CNOT from control to target realizes the index-wise logical CNOT."""
    return not cnot_witnesses(control, target)


def cz_witnesses(a, b):
    _require_same_shape(a, b)
    witnesses = []
    bad = _orthogonal_violations(a.mapping_a, b.hx)
    if bad:
        witnesses.append({'condition': 'mapping_in_b_c4', 'vectors': bad})
    bad = _outside(b.hz, a.hx)
    if bad:
        witnesses.append({'condition': 'a_stabilizers_in_b_z_span', 'vectors': bad})
    if a.k and a.mapping_a @ b.mapping_a.T != BitMatrix.identity(a.k):
        witnesses.append({'condition': 'mapping_product_identity',
                          'vectors': [list(r.support) for r in a.mapping_a]})
    return witnesses


def check_cz_sufficient(a, b):
    return not cz_witnesses(a, b)


def _exact_cz_blocks(a, b):
    A, B, Y, Z = a.mapping_a, b.mapping_a, a.hx, b.hx
    blocks = []
    for name, left, right in (('A_Z', A, Z), ('Y_B', Y, B), ('Y_Z', Y, Z)):
        if left.rows and right.rows and not (left @ right.T).is_zero():
            blocks.append({'condition': f'bilinear_block_{name}',
                           'vectors': [list(r.support) for r in left]})
    if a.k and A @ B.T != BitMatrix.identity(a.k):
        blocks.append({'condition': 'mapping_product_identity',
                       'vectors': [list(r.support) for r in A]})
    return blocks


def _exhaustive_cz(a, b):
    """Check (x^A + y)(x^B + z) = alpha . beta over every coset element; n <= 20."""
    if a.n > 20:
        raise TooLarge(f'exhaustive CZ check limited to n <= 20, got {a.n}')
    ya = gf2core.span_elements(a.hx).astype(np.int64)
    zb = gf2core.span_elements(b.hx).astype(np.int64)
    A = a.mapping_a.bits.astype(np.int64)
    B = b.mapping_a.bits.astype(np.int64)
    for alpha in product((0, 1), repeat=a.k):
        xa = (np.array(alpha, dtype=np.int64) @ A) & 1 if a.k else np.zeros(a.n, np.int64)
        left = (ya + xa) & 1
        for beta in product((0, 1), repeat=b.k):
            xb = (np.array(beta, dtype=np.int64) @ B) & 1 if b.k else np.zeros(b.n, np.int64)
            right = (zb + xb) & 1
            expected = int(np.dot(alpha, beta)) & 1
            if (((left @ right.T) & 1) != expected).any():
                return False
    return True


def check_cz_exact(a, b, exhaustive=False):
    _require_same_shape(a, b)
    if exhaustive:
        return _exhaustive_cz(a, b)
    return not _exact_cz_blocks(a, b)


def check_pair(a, b, exact_cz=False):
    forward = cnot_witnesses(a, b)
    backward = cnot_witnesses(b, a)
    if exact_cz:
        cz_fail = _exact_cz_blocks(a, b) + _exact_cz_blocks(b, a)
    else:
        cz_fail = cz_witnesses(a, b) + cz_witnesses(b, a)
    witnesses = (
        [dict(w, direction='forward') for w in forward]
        + [dict(w, direction='backward') for w in backward]
        + [dict(w, direction='cz') for w in cz_fail]
    )
    report = PairReport(
        cnot_forward=not forward,
        cnot_backward=not backward,
        cz=not cz_fail,
        witnesses=witnesses,
        cz_exact=exact_cz,
    )
    logger.debug('pair %s/%s: %s', a.name, b.name, report.to_dict())
    return report
