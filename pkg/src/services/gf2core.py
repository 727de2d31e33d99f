"""
Exact linear algebra over GF(2).

Ranks, duals, quotients and span enumeration on dense uint8 matrices, plus
the self-orthogonal extension search used to build symmetric companion codes.
"""
import logging

import numpy as np

from src.config import get_config
from src.errors import NoExtension, SubspaceViolation, TooLarge
from src.models.bitmatrix import BitMatrix, BitVector

logger = logging.getLogger(__name__)

_CHUNK = 1 << 16


def rref(m):
    """Reduced row echelon form: (reduced, rank, pivots) with leftmost pivots first."""
    R = np.array(m.bits, dtype=np.uint8)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(R[r:, c])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        mask = R[:, c].astype(bool)
        mask[r] = False
        R[mask] ^= R[r]
        pivots.append(c)
        r += 1
    return BitMatrix(R, cols=cols), r, pivots


def rank(m):
    return rref(m)[1]


def basis(m):
    """Independent rows spanning span(m), in reduced echelon form."""
    reduced, r, _ = rref(m)
    return BitMatrix(reduced.bits[:r], cols=m.cols)


def in_span(m, v):
    if m.rows == 0:
        return not bool(v)
    return rank(BitMatrix.vstack(m, BitMatrix.from_rows([v], cols=m.cols))) == rank(m)


def span_contains(big, small):
    """True iff span(small) is a subspace of span(big)."""
    if small.rows == 0:
        return True
    r = rank(big)
    return rank(BitMatrix.vstack(big, small)) == r


def same_span(a, b):
    return span_contains(a, b) and span_contains(b, a)


def dual_basis(m):
    """Basis of the null space {v : m v^T = 0}, one row per free column."""
    reduced, r, pivots = rref(m)
    n = m.cols
    free = [c for c in range(n) if c not in set(pivots)]
    out = np.zeros((len(free), n), dtype=np.uint8)
    for i, f in enumerate(free):
        out[i, f] = 1
        for row, p in enumerate(pivots):
            out[i, p] = reduced.bits[row, f]
    return BitMatrix(out, cols=n)


def is_self_orthogonal(m):
    if m.rows == 0:
        return True
    return (m @ m.T).is_zero()


def quotient_basis(c, d):
    """Rows of c extending a basis of span(d) to span(c), chosen greedily in row order."""
    if not span_contains(c, d):
        raise SubspaceViolation('span(d) is not contained in span(c)')
    current = basis(d) if d.rows else BitMatrix.zeros(0, c.cols)
    chosen = []
    r = current.rows
    for row in c:
        trial = BitMatrix.vstack(current, BitMatrix.from_rows([row], cols=c.cols))
        tr = rank(trial)
        if tr > r:
            chosen.append(row)
            current, r = trial, tr
    return BitMatrix.from_rows(chosen, cols=c.cols)


def _limit(limit):
    return get_config().COSET_ENUMERATION_LIMIT if limit is None else limit


def iter_span_chunks(m, limit=None, chunk=_CHUNK):
    """Yield the elements of span(m) as stacked uint8 blocks, zero vector first."""
    b = basis(m)
    r = b.rows
    total = 1 << r
    if total > _limit(limit):
        raise TooLarge(f'span of dimension {r} exceeds the enumeration limit', dimension=r)
    gens = b.bits.astype(np.int64)
    shifts = np.arange(r, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        coeff = (idx[:, None] >> shifts) & 1
        yield ((coeff @ gens) & 1).astype(np.uint8) if r else np.zeros((idx.size, m.cols), dtype=np.uint8)


def span_elements(m, limit=None):
    blocks = list(iter_span_chunks(m, limit))
    return np.vstack(blocks) if blocks else np.zeros((1, m.cols), dtype=np.uint8)


def lex_key(bits):
    return tuple(int(i) + 1 for i in np.flatnonzero(bits))


def colex_key(bits):
    return tuple(sorted(lex_key(bits), reverse=True))


def _best(elements, key):
    weights = elements.sum(axis=1)
    w = weights.min()
    rows = elements[weights == w]
    return min(rows, key=key)


def min_weight_representative(base, subspace, key=lex_key, limit=None):
    """Minimum-weight element of base + span(subspace); ties go to the smallest key."""
    members = span_elements(subspace, limit) ^ base.bits
    return BitVector(_best(members, key))


def min_coset_weight(space, subspace, limit=None):
    """Minimum weight over span(space) minus span(subspace), by exhaustive enumeration."""
    if not span_contains(space, subspace):
        raise SubspaceViolation('subspace is not contained in space')
    if rank(space) == (rank(subspace) if subspace.rows else 0):
        raise SubspaceViolation('space adds nothing beyond the subspace')
    checks = dual_basis(subspace) if subspace.rows else BitMatrix.identity(space.cols)
    checks_t = checks.bits.T.astype(np.int64)
    best = space.cols + 1
    for block in iter_span_chunks(space, limit):
        outside = ((block.astype(np.int64) @ checks_t) & 1).any(axis=1)
        if outside.any():
            best = min(best, int(block[outside].sum(axis=1).min()))
    return best


def _span_key(masks):
    """Canonical key for the span of integer bitmasks."""
    span = {0}
    for m in masks:
        span |= {s ^ m for s in span}
    return frozenset(span)


def _independent(basis_masks, mask):
    # basis elements carry distinct leading bits
    for b in sorted(basis_masks, reverse=True):
        mask = min(mask, mask ^ b)
    return mask != 0, mask


def find_self_orthogonal_extensions(g0, candidates, r, limit, budget=None):
    """Search r-row extensions B with [g0; B] self-orthogonal and of full rank.

    The pool holds one representative per nonzero coset of span(g0) inside
    span(candidates) + span(g0): its minimum-weight member, ties broken
    colexicographically. Index tuples over the sorted pool are explored in
    increasing order and results are deduplicated by the span of [g0; B].
    """
    n = g0.cols
    if r == 0:
        return [BitMatrix.zeros(0, n)]
    budget = get_config().EXTENSION_SEARCH_BUDGET if budget is None else budget

    quotient = quotient_basis(BitMatrix.vstack(g0, candidates), g0)
    s = quotient.rows
    if r > s:
        raise NoExtension(f'only {s} quotient directions available, {r} requested')

    g0_members = span_elements(g0)
    qbits = quotient.bits.astype(np.int64)
    pool = []
    for mask in range(1, 1 << s):
        coeff = np.array([(mask >> i) & 1 for i in range(s)], dtype=np.int64)
        rep_base = (coeff @ qbits) & 1
        rep = _best(g0_members ^ rep_base.astype(np.uint8), colex_key)
        if rep.sum() % 2 or (g0.rows and ((g0.bits.astype(np.int64) @ rep) & 1).any()):
            continue
        pool.append((int(rep.sum()), colex_key(rep), mask, rep))
    pool.sort(key=lambda item: (item[0], item[1]))
    logger.debug('extension pool has %d self-orthogonal coset representatives', len(pool))

    results, seen = [], set()
    visited = 0
    truncated = False

    def dfs(start, picks, masks, reduced):
        nonlocal visited, truncated
        if len(picks) == r:
            key = _span_key(masks)
            if key not in seen:
                seen.add(key)
                results.append(BitMatrix.from_rows([pool[i][3] for i in picks], cols=n))
            return
        for i in range(start, len(pool)):
            if len(results) >= limit or truncated:
                return
            visited += 1
            if visited > budget:
                truncated = True
                return
            rep, mask = pool[i][3], pool[i][2]
            if any(int(np.bitwise_and(rep, pool[j][3]).sum()) % 2 for j in picks):
                continue
            ok, residue = _independent(reduced, mask)
            if not ok:
                continue
            dfs(i + 1, picks + [i], masks + [mask], reduced + [residue])

    dfs(0, [], [], [])
    if truncated:
        logger.warning('extension search stopped after %d nodes (budget %d)', budget, budget)
    if not results:
        raise NoExtension(f'no self-orthogonal extension of size {r} found')
    logger.info('found %d self-orthogonal extension(s) of size %d', len(results), r)
    return results
