"""
Syndrome lookup decoders for CSS codes.

A decoder for X errors reads Z-stabilizer syndromes (check matrix hz); a
decoder for Z errors reads X-stabilizer syndromes (check matrix hx). Tables
are filled with errors in increasing weight, lexicographic order, so every
entry is a minimum-weight correction with the lexicographic tie-break.
"""
import logging
from itertools import combinations

import numpy as np

from src.config import get_config
from src.errors import InvalidLabel, TooLarge, UndecodableSyndrome
from src.models.bitmatrix import BitMatrix, BitVector
from src.services import gf2core

logger = logging.getLogger(__name__)


def check_matrix(code, pauli):
    if pauli == 'X':
        return code.hz
    if pauli == 'Z':
        return code.hx
    raise InvalidLabel(f'decoder Pauli must be X or Z, got {pauli!r}')


class LookupDecoder:
    def __init__(self, code, pauli, table, certified_weight, check):
        self.code = code
        self.pauli = pauli
        self.table = table
        self.certified_weight = certified_weight
        self.check = check
        self._check_t = check.bits.T.astype(np.int64)

    def syndrome(self, word):
        bits = word.bits if isinstance(word, BitVector) else np.asarray(word, dtype=np.uint8)
        return tuple(int(s) for s in (bits.astype(np.int64) @ self._check_t) & 1)

    def decode(self, syndrome):
        key = tuple(int(s) for s in syndrome)
        try:
            return self.table[key]
        except KeyError:
            raise UndecodableSyndrome(
                f'syndrome {"".join(map(str, key))} is not in the {self.pauli} table of {self.code.name}',
                syndrome=list(key))

    def truncated(self, weight):
        """Copy keeping only corrections of weight <= weight."""
        table = {s: e for s, e in self.table.items() if e.weight <= weight}
        return LookupDecoder(self.code, self.pauli, table,
                             min(self.certified_weight, weight), self.check)

    @property
    def max_weight(self):
        return max((e.weight for e in self.table.values()), default=0)

    def __repr__(self):
        return f'<LookupDecoder {self.code.name}/{self.pauli} entries={len(self.table)}>'


def build_decoder(code, pauli, max_weight=None, limit=None):
    check = check_matrix(code, pauli)
    n = code.n
    stabilizers = gf2core.rank(check) if check.rows else 0
    limit = get_config().COSET_ENUMERATION_LIMIT if limit is None else limit
    if (1 << stabilizers) > limit:
        raise TooLarge(f'{1 << stabilizers} syndromes exceed the enumeration limit')

    kernel = gf2core.dual_basis(check) if check.rows else None
    if kernel is None or kernel.rows == 0:
        distance = n + 1
    else:
        distance = gf2core.min_coset_weight(kernel, BitMatrix.zeros(0, n), limit)

    check_t = check.bits.T.astype(np.int64)
    table = {tuple([0] * check.rows): BitVector.zeros(n)}
    reachable = 1 << stabilizers
    top = n if max_weight is None else min(max_weight, n)
    for w in range(1, top + 1):
        if len(table) == reachable:
            break
        for support in combinations(range(n), w):
            bits = np.zeros(n, dtype=np.uint8)
            bits[list(support)] = 1
            key = tuple(int(s) for s in (bits.astype(np.int64) @ check_t) & 1)
            if key not in table:
                table[key] = BitVector(bits)
    certified = (distance - 1) // 2
    if max_weight is not None:
        certified = min(certified, max_weight)
    logger.debug('decoder %s/%s: %d syndromes, certified weight %d',
                 code.name, pauli, len(table), certified)
    return LookupDecoder(code, pauli, table, certified, check)


class DecoderPolicy:
    """Chooses the decoder used for each (code, error type) during protocol runs.

    ``capacity`` maps 'X'/'Z' to the largest correctable weight; syndromes
    beyond it are undecodable and count as failures.
    """

    def __init__(self, name='merged', capacity=None):
        self.name = name
        self.capacity = dict(capacity or {})
        self._cache = {}

    @classmethod
    def minimum_weight(cls):
        return cls('merged')

    @classmethod
    def capacity_limited(cls, x=1, z=1, name='baseline'):
        return cls(name, {'X': x, 'Z': z})

    @classmethod
    def named(cls, name):
        if name == 'merged':
            return cls.minimum_weight()
        if name == 'baseline':
            return cls.capacity_limited()
        raise InvalidLabel(f'unknown decoder policy {name!r}')

    def decoder(self, code, pauli):
        key = (id(code), pauli)
        if key not in self._cache:
            full = build_decoder(code, pauli)
            cap = self.capacity.get(pauli)
            self._cache[key] = (code, full if cap is None else full.truncated(cap))
        return self._cache[key][1]

    def __getstate__(self):
        return {'name': self.name, 'capacity': self.capacity}

    def __setstate__(self, state):
        self.name = state['name']
        self.capacity = state['capacity']
        self._cache = {}

    def __repr__(self):
        return f'<DecoderPolicy {self.name} {self.capacity}>'
