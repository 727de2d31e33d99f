import numpy as np

from src.errors import ParseError, DimensionMismatch


def _frozen(arr):
    arr = np.ascontiguousarray(arr, dtype=np.uint8)
    arr.setflags(write=False)
    return arr


class BitVector:
    """Binary vector over GF(2); supports are reported 1-indexed"""

    __slots__ = ('_bits',)

    def __init__(self, bits):
        arr = np.asarray(bits, dtype=np.uint8).reshape(-1) & 1
        self._bits = _frozen(arr)

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_support(cls, support, n):
        bits = np.zeros(n, dtype=np.uint8)
        for q in support:
            if not 1 <= q <= n:
                raise DimensionMismatch(f'qubit {q} outside 1..{n}')
            bits[q - 1] ^= 1
        return cls(bits)

    @classmethod
    def from_string(cls, text):
        text = text.strip()
        if any(ch not in '01' for ch in text):
            raise ParseError(f'invalid bit string {text!r}')
        return cls([int(ch) for ch in text])

    @property
    def bits(self):
        return self._bits

    @property
    def len(self):
        return self._bits.shape[0]

    @property
    def weight(self):
        return int(self._bits.sum())

    @property
    def support(self):
        return tuple(int(i) + 1 for i in np.flatnonzero(self._bits))

    def dot(self, other):
        if self.len != other.len:
            raise DimensionMismatch(f'length {self.len} vs {other.len}')
        return int(np.bitwise_and(self._bits, other._bits).sum() & 1)

    def __add__(self, other):
        if self.len != other.len:
            raise DimensionMismatch(f'length {self.len} vs {other.len}')
        return BitVector(self._bits ^ other._bits)

    def __len__(self):
        return self.len

    def __eq__(self, other):
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.len == other.len and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self):
        return hash((self.len, self._bits.tobytes()))

    def __bool__(self):
        return bool(self._bits.any())

    def to_string(self):
        return ''.join('1' if b else '0' for b in self._bits)

    def __repr__(self):
        return f'<BitVector {self.to_string()}>'


class BitMatrix:
    """Dense GF(2) matrix stored as a read-only uint8 array"""

    __slots__ = ('_bits',)

    def __init__(self, bits, cols=None):
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else np.zeros((0, cols or 0), dtype=np.uint8)
        elif arr.ndim == 2 and arr.shape[0] == 0 and cols is not None:
            arr = np.zeros((0, cols), dtype=np.uint8)
        if arr.ndim != 2:
            raise DimensionMismatch(f'expected a 2-d array, got shape {arr.shape}')
        if cols is not None and arr.shape[1] != cols:
            raise DimensionMismatch(f'expected {cols} columns, got {arr.shape[1]}')
        self._bits = _frozen(arr & 1)

    # Constructors

    @classmethod
    def zeros(cls, rows, cols):
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_rows(cls, rows, cols=None):
        rows = [r.bits if isinstance(r, BitVector) else np.asarray(r, dtype=np.uint8)
                for r in rows]
        if not rows:
            return cls.zeros(0, cols or 0)
        return cls(np.vstack(rows), cols=cols)

    @classmethod
    def from_supports(cls, supports, n):
        return cls.from_rows([BitVector.from_support(s, n).bits for s in supports], cols=n) \
            if supports else cls.zeros(0, n)

    @classmethod
    def vstack(cls, *matrices):
        matrices = [m for m in matrices if m is not None]
        widths = {m.cols for m in matrices}
        if len(widths) > 1:
            raise DimensionMismatch(f'cannot stack widths {sorted(widths)}')
        if not matrices:
            return cls.zeros(0, 0)
        return cls(np.vstack([m.bits for m in matrices]), cols=widths.pop())

    @classmethod
    def parse(cls, text):
        """Parse one row per line of 0/1 characters; blank lines and # comments are skipped."""
        rows = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith('#'):
                continue
            bad = [ch for ch in line if ch not in '01']
            if bad:
                raise ParseError(f'line {lineno}: unexpected character {bad[0]!r}', line=lineno)
            rows.append([int(ch) for ch in line])
        if not rows:
            raise ParseError('matrix text contains no rows')
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ParseError(f'rows have differing lengths {sorted(widths)}')
        return cls(np.array(rows, dtype=np.uint8))

    # Accessors

    @property
    def bits(self):
        return self._bits

    @property
    def rows(self):
        return self._bits.shape[0]

    @property
    def cols(self):
        return self._bits.shape[1]

    @property
    def shape(self):
        return self._bits.shape

    @property
    def T(self):
        return BitMatrix(self._bits.T.copy())

    def row(self, i):
        return BitVector(self._bits[i])

    def weights(self):
        return [int(w) for w in self._bits.sum(axis=1)]

    def supports(self):
        return [self.row(i).support for i in range(self.rows)]

    def __iter__(self):
        for i in range(self.rows):
            yield self.row(i)

    def __len__(self):
        return self.rows

    def __matmul__(self, other):
        if isinstance(other, BitVector):
            if other.len != self.cols:
                raise DimensionMismatch(f'{self.shape} @ vector of length {other.len}')
            prod = self._bits.astype(np.int64) @ other.bits.astype(np.int64)
            return BitVector(prod & 1)
        if other.rows != self.cols:
            raise DimensionMismatch(f'{self.shape} @ {other.shape}')
        prod = self._bits.astype(np.int64) @ other.bits.astype(np.int64)
        return BitMatrix(prod & 1)

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self):
        return hash((self.shape, self._bits.tobytes()))

    def is_zero(self):
        return not self._bits.any()

    def to_text(self):
        return '\n'.join(''.join('1' if b else '0' for b in r) for r in self._bits)

    def to_dict(self):
        return {
            'rows': self.rows,
            'cols': self.cols,
            'matrix': [''.join('1' if b else '0' for b in r) for r in self._bits],
        }

    def __repr__(self):
        return f'<BitMatrix {self.rows}x{self.cols}>'
