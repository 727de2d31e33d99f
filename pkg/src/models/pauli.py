import numpy as np

from src.errors import DimensionMismatch, ParseError

_PHASE_PREFIX = {'': 0, '+': 0, '+i': 1, 'i': 1, '-': 2, '-i': 3}
_PHASE_TEXT = {0: '+', 1: '+i', 2: '-', 3: '-i'}
_LETTERS = {'I': (0, 0), 'X': (1, 0), 'Z': (0, 1), 'Y': (1, 1), '_': (0, 0)}


def phase_exponent(x1, z1, x2, z2):
    """Exponent of i picked up by multiplying the single-qubit Paulis (x1, z1)(x2, z2)."""
    x1 = x1.astype(np.int64)
    z1 = z1.astype(np.int64)
    x2 = x2.astype(np.int64)
    z2 = z2.astype(np.int64)
    g = np.where(x1 & z1, z2 - x2, 0)
    g = g + np.where(x1 & (1 - z1), z2 * (2 * x2 - 1), 0)
    g = g + np.where((1 - x1) & z1, x2 * (1 - 2 * z2), 0)
    return int(g.sum())


class PauliOperator:
    """n-qubit Pauli i^phase * E(a, b), where E uses Y = iXZ on overlapping qubits"""

    __slots__ = ('a', 'b', 'phase')

    def __init__(self, a, b, phase=0):
        self.a = np.asarray(a, dtype=np.uint8).reshape(-1) & 1
        self.b = np.asarray(b, dtype=np.uint8).reshape(-1) & 1
        if self.a.shape != self.b.shape:
            raise DimensionMismatch(f'X part {self.a.shape} vs Z part {self.b.shape}')
        self.phase = int(phase) % 4

    @classmethod
    def identity(cls, n):
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8))

    @classmethod
    def from_string(cls, text):
        text = text.strip()
        body = text.lstrip('+-i')
        prefix = text[:len(text) - len(body)]
        if prefix not in _PHASE_PREFIX:
            raise ParseError(f'bad phase prefix {prefix!r} in {text!r}')
        try:
            pairs = [_LETTERS[ch] for ch in body.upper()]
        except KeyError as e:
            raise ParseError(f'bad Pauli letter {e.args[0]!r} in {text!r}')
        a = np.array([p[0] for p in pairs], dtype=np.uint8)
        b = np.array([p[1] for p in pairs], dtype=np.uint8)
        return cls(a, b, _PHASE_PREFIX[prefix])

    @classmethod
    def x_type(cls, support, n):
        """X on the given 1-indexed qubits"""
        a = np.zeros(n, np.uint8)
        for q in support:
            a[q - 1] ^= 1
        return cls(a, np.zeros(n, np.uint8))

    @classmethod
    def z_type(cls, support, n):
        b = np.zeros(n, np.uint8)
        for q in support:
            b[q - 1] ^= 1
        return cls(np.zeros(n, np.uint8), b)

    @classmethod
    def single(cls, letter, qubit, n):
        """Single-qubit Pauli on a 0-indexed qubit"""
        a = np.zeros(n, np.uint8)
        b = np.zeros(n, np.uint8)
        a[qubit], b[qubit] = _LETTERS[letter]
        return cls(a, b)

    @property
    def n(self):
        return self.a.shape[0]

    @property
    def weight(self):
        return int((self.a | self.b).sum())

    @property
    def support(self):
        return tuple(int(i) + 1 for i in np.flatnonzero(self.a | self.b))

    @property
    def is_hermitian(self):
        return self.phase % 2 == 0

    def compose(self, other):
        """self * other with exact phase tracking"""
        if self.n != other.n:
            raise DimensionMismatch(f'{self.n} vs {other.n} qubits')
        g = phase_exponent(self.a, self.b, other.a, other.b)
        return PauliOperator(self.a ^ other.a, self.b ^ other.b, self.phase + other.phase + g)

    __mul__ = compose

    def commutes_with(self, other):
        if self.n != other.n:
            raise DimensionMismatch(f'{self.n} vs {other.n} qubits')
        s = int((self.a & other.b).sum() + (self.b & other.a).sum())
        return s % 2 == 0

    def embed(self, offset, total):
        """Place this operator on qubits offset..offset+n-1 of a larger register."""
        a = np.zeros(total, np.uint8)
        b = np.zeros(total, np.uint8)
        a[offset:offset + self.n] = self.a
        b[offset:offset + self.n] = self.b
        return PauliOperator(a, b, self.phase)

    def __neg__(self):
        return PauliOperator(self.a, self.b, self.phase + 2)

    def __eq__(self, other):
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return (self.phase == other.phase and np.array_equal(self.a, other.a)
                and np.array_equal(self.b, other.b))

    def __hash__(self):
        return hash((self.phase, self.a.tobytes(), self.b.tobytes()))

    def to_string(self):
        letters = 'IXZY'
        body = ''.join(letters[int(x) + 2 * int(z)] for x, z in zip(self.a, self.b))
        return _PHASE_TEXT[self.phase] + body

    def __repr__(self):
        return f'<PauliOperator {self.to_string()}>'
