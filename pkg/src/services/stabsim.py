"""
Clifford stabilizer simulation on top of StabilizerTableau.

Functions here copy their input tableau; the in-place methods of the
tableau itself are used by the protocol runner.
"""
import logging
from functools import lru_cache

import numpy as np

from src.errors import IndexOutOfRange, InvalidLabel
from src.models.bitmatrix import BitMatrix, BitVector
from src.models.pauli import PauliOperator
from src.models.tableau import MeasurementRecord, StabilizerTableau, rowsum  # noqa: F401
from src.services import gf2core
from src.services.decoders import build_decoder

logger = logging.getLogger(__name__)

LABELS = ('0', '1', '+', '-')

GATES = {
    'H': 'h', 'S': 's', 'SDG': 'sdg',
    'X': 'x_gate', 'Y': 'y_gate', 'Z': 'z_gate',
    'CNOT': 'cnot', 'CX': 'cnot', 'CZ': 'cz',
}
TWO_QUBIT = {'CNOT', 'CX', 'CZ'}
INVERSE = {'H': 'H', 'S': 'SDG', 'SDG': 'S', 'X': 'X', 'Y': 'Y', 'Z': 'Z',
           'CNOT': 'CNOT', 'CX': 'CX', 'CZ': 'CZ'}


class RandomOutcome:
    """Draw nondeterministic outcomes from a seeded generator."""

    def __init__(self, seed=None, rng=None):
        self.rng = rng if rng is not None else np.random.default_rng(seed)

    def forced(self):
        return None


class ForcedOutcome:
    def __init__(self, bit):
        self.bit = int(bit)
        self.rng = None

    def forced(self):
        return self.bit


def zero_state(n):
    return StabilizerTableau.zero_state(n)


def normalize_labels(code, labels):
    labels = tuple(labels)
    if len(labels) != code.k:
        raise InvalidLabel(f'{len(labels)} labels for {code.k} logical qubits')
    for label in labels:
        if label not in LABELS:
            raise InvalidLabel(f'logical label must be one of 0, 1, +, -; got {label!r}')
    return labels


def encoding_gates(code, labels):
    """H/CNOT fan-out preparing the code state, then logical Paulis for 1 and -.

    The X-type generators (hx plus X_L of every + or - qubit) are row reduced;
    H on each pivot followed by CNOTs from the pivot to the rest of its row
    prepares the uniform superposition over their span.
    """
    labels = normalize_labels(code, labels)
    rows = [code.hx] if code.hx.rows else []
    plus = [i for i, label in enumerate(labels) if label in '+-']
    if plus:
        rows.append(BitMatrix.from_rows([code.logical_x.row(i) for i in plus], cols=code.n))
    gates = []
    if rows:
        reduced, rank, pivots = gf2core.rref(BitMatrix.vstack(*rows))
        for p in pivots:
            gates.append(('H', p))
        for i, p in enumerate(pivots):
            for t in np.flatnonzero(reduced.bits[i]):
                if int(t) != p:
                    gates.append(('CNOT', p, int(t)))
    for i, label in enumerate(labels):
        if label == '1':
            gates.extend(('X', q - 1) for q in code.logical_x.row(i).support)
        elif label == '-':
            gates.extend(('Z', q - 1) for q in code.logical_z.row(i).support)
    return gates


def run_gates(t, gates):
    for name, *qubits in gates:
        getattr(t, GATES[name])(*qubits)
    return t


def encode_logical(code, labels):
    """Tableau of the code state with the given per-qubit logical labels."""
    return run_gates(zero_state(code.n), encoding_gates(code, labels))


@lru_cache(maxsize=64)
def _cached_encoding(code, labels):
    return encode_logical(code, labels)


def encoded(code, labels):
    """Cached encode_logical; the returned tableau is a fresh copy."""
    return _cached_encoding(code, tuple(labels)).copy()


def apply_gate(t, name, *qubits):
    name = name.upper()
    if name not in GATES:
        raise InvalidLabel(f'unknown gate {name!r}')
    if len(qubits) != (2 if name in TWO_QUBIT else 1):
        raise IndexOutOfRange(f'{name} expects {2 if name in TWO_QUBIT else 1} qubit(s)')
    out = t.copy()
    getattr(out, GATES[name])(*qubits)
    return out


def measure(t, qubit, basis, policy):
    """Measure a qubit in the Z or X basis; returns (tableau, outcome, deterministic)."""
    if basis not in ('X', 'Z'):
        raise InvalidLabel(f'measurement basis must be X or Z, got {basis!r}')
    out = t.copy()
    outcome, deterministic = out.measure(qubit, basis, policy.forced(), policy.rng)
    return out, outcome, deterministic


def reset(t, qubit):
    """Return the qubit to |0>."""
    out = t.copy()
    # a random outcome collapses to 0; a deterministic 1 is flipped back
    outcome, _ = out.measure(qubit, 'Z')
    if outcome:
        out.x_gate(qubit)
    return out


def apply_pauli(t, p):
    out = t.copy()
    out.apply_pauli(p)
    return out


def expectation(t, p):
    return t.expectation(p)


def is_stabilized_by(t, p):
    return t.expectation(p) == 1


def canonicalize(t):
    """Stabilizer rows after symplectic Gaussian elimination, X pivots first then Z pivots.

    Returns (x, z, r) arrays; equal results mean equal stabilizer groups.
    """
    n = t.n
    x = np.vstack([t.x[n:2 * n], np.zeros((1, n), np.uint8)])
    z = np.vstack([t.z[n:2 * n], np.zeros((1, n), np.uint8)])
    r = np.concatenate([t.r[n:2 * n], np.zeros(1, np.uint8)])
    top = 0
    for part in (x, z):
        for col in range(n):
            if top == n:
                break
            hits = np.flatnonzero(part[top:n, col])
            if hits.size == 0:
                continue
            p = top + int(hits[0])
            if p != top:
                x[[top, p]] = x[[p, top]]
                z[[top, p]] = z[[p, top]]
                r[[top, p]] = r[[p, top]]
            for row in range(n):
                if row != top and part[row, col]:
                    rowsum(x, z, r, row, top)
            top += 1
    return x[:n], z[:n], r[:n]


def same_state(t1, t2):
    if t1.n != t2.n:
        return False
    a, b = canonicalize(t1), canonicalize(t2)
    return all(np.array_equal(u, v) for u, v in zip(a, b))


def logical_readout(outcomes, code, basis, decoder=None):
    """Decode a full-block measurement word into logical bits.

    A Z-basis word is checked against hz and corrected for X errors; an
    X-basis word against hx for Z errors. Returns (logical bits, syndrome).
    """
    word = BitVector(outcomes)
    if word.len != code.n:
        raise IndexOutOfRange(f'{word.len} outcomes for a {code.n}-qubit block')
    if basis == 'Z':
        error_type, logical = 'X', code.logical_z
    elif basis == 'X':
        error_type, logical = 'Z', code.logical_x
    else:
        raise InvalidLabel(f'readout basis must be X or Z, got {basis!r}')
    decoder = decoder or _default_decoder(code, error_type)
    syndrome = decoder.syndrome(word)
    corrected = word + decoder.decode(syndrome)
    bits = [corrected.dot(row) for row in logical]
    return bits, syndrome


@lru_cache(maxsize=32)
def _default_decoder(code, error_type):
    return build_decoder(code, error_type)
