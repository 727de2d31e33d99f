"""
Stabilizer tableau in the destabilizer/stabilizer layout.

Rows 0..n-1 hold destabilizers, rows n..2n-1 stabilizers and row 2n is a
scratch row used for sign accumulation. Row k stands for (-1)^r[k] times the
tensor product of X, Z or Y (x=z=1) letters.
"""
from dataclasses import dataclass, field

import numba
import numpy as np

from src.errors import ForcedContradiction, IndexOutOfRange
from src.models.pauli import PauliOperator


@numba.njit(cache=True)
def rowsum(x, z, r, h, i):
    """Replace row h by row i * row h, tracking the sign."""
    total = 2 * np.int64(r[h]) + 2 * np.int64(r[i])
    for j in range(x.shape[1]):
        x1 = np.int64(x[i, j])
        z1 = np.int64(z[i, j])
        x2 = np.int64(x[h, j])
        z2 = np.int64(z[h, j])
        if x1 == 1 and z1 == 1:
            total += z2 - x2
        elif x1 == 1:
            total += z2 * (2 * x2 - 1)
        elif z1 == 1:
            total += x2 * (1 - 2 * z2)
        x[h, j] = x[h, j] ^ x[i, j]
        z[h, j] = z[h, j] ^ z[i, j]
    r[h] = 0 if total % 4 == 0 else 1


@numba.njit(cache=True)
def collapse(x, z, r, p, anti, n):
    """Random-outcome update: clear anticommutation with row p, move row p to the destabilizers."""
    for i in range(2 * n):
        if i != p and anti[i]:
            rowsum(x, z, r, i, p)
    for j in range(x.shape[1]):
        x[p - n, j] = x[p, j]
        z[p - n, j] = z[p, j]
        x[p, j] = 0
        z[p, j] = 0
    r[p - n] = r[p]


@numba.njit(cache=True)
def accumulate(x, z, r, anti, n):
    """Product of the stabilizers paired with anticommuting destabilizers, left in the scratch row."""
    s = 2 * n
    for j in range(x.shape[1]):
        x[s, j] = 0
        z[s, j] = 0
    r[s] = 0
    for i in range(n):
        if anti[i]:
            rowsum(x, z, r, s, i + n)
    return r[s]


class StabilizerTableau:
    __slots__ = ('x', 'z', 'r')

    def __init__(self, x, z, r):
        self.x = x
        self.z = z
        self.r = r

    @classmethod
    def zero_state(cls, n):
        x = np.zeros((2 * n + 1, n), dtype=np.uint8)
        z = np.zeros((2 * n + 1, n), dtype=np.uint8)
        idx = np.arange(n)
        x[idx, idx] = 1
        z[n + idx, idx] = 1
        return cls(x, z, np.zeros(2 * n + 1, dtype=np.uint8))

    @property
    def n(self):
        return self.x.shape[1]

    def copy(self):
        return StabilizerTableau(self.x.copy(), self.z.copy(), self.r.copy())

    def _check(self, *qubits):
        for q in qubits:
            if not 0 <= q < self.n:
                raise IndexOutOfRange(f'qubit {q} outside 0..{self.n - 1}')
        if len(set(qubits)) != len(qubits):
            raise IndexOutOfRange(f'gate on repeated qubits {qubits}')

    # Clifford gates, in place

    def h(self, a):
        self._check(a)
        x, z = self.x, self.z
        self.r ^= x[:, a] & z[:, a]
        col = x[:, a].copy()
        x[:, a] = z[:, a]
        z[:, a] = col

    def s(self, a):
        self._check(a)
        self.r ^= self.x[:, a] & self.z[:, a]
        self.z[:, a] ^= self.x[:, a]

    def sdg(self, a):
        self.z_gate(a)
        self.s(a)

    def x_gate(self, a):
        self._check(a)
        self.r ^= self.z[:, a]

    def y_gate(self, a):
        self._check(a)
        self.r ^= self.x[:, a] ^ self.z[:, a]

    def z_gate(self, a):
        self._check(a)
        self.r ^= self.x[:, a]

    def cnot(self, a, b):
        self._check(a, b)
        x, z = self.x, self.z
        self.r ^= x[:, a] & z[:, b] & (x[:, b] ^ z[:, a] ^ 1)
        x[:, b] ^= x[:, a]
        z[:, a] ^= z[:, b]

    def cz(self, a, b):
        self.h(b)
        self.cnot(a, b)
        self.h(b)

    def apply_pauli(self, p):
        """Conjugate by p: flip the sign of every row anticommuting with it."""
        self.r ^= self.anticommuting(p)

    # Queries

    def anticommuting(self, p):
        if p.n != self.n:
            raise IndexOutOfRange(f'Pauli on {p.n} qubits, tableau has {self.n}')
        prod = self.x.astype(np.int64) @ p.b.astype(np.int64) \
            + self.z.astype(np.int64) @ p.a.astype(np.int64)
        return (prod & 1).astype(np.uint8)

    def expectation(self, p):
        """+1 or -1 when +-p lies in the stabilizer group, 0 otherwise."""
        n = self.n
        anti = self.anticommuting(p)
        if anti[n:2 * n].any():
            return 0
        sign = accumulate(self.x, self.z, self.r, anti, n)
        return -1 if (int(sign) + p.phase // 2) % 2 else 1

    def measure_pauli(self, p, outcome=None, rng=None):
        """Measure a Hermitian Pauli; returns (outcome bit, deterministic)."""
        n = self.n
        anti = self.anticommuting(p)
        stab_hits = np.flatnonzero(anti[n:2 * n])
        if stab_hits.size == 0:
            sign = accumulate(self.x, self.z, self.r, anti, n)
            value = (int(sign) + p.phase // 2) % 2
            if outcome is not None and outcome != value:
                raise ForcedContradiction(
                    f'measurement of {p.to_string()} is deterministic with outcome {value}')
            return value, True
        if outcome is None:
            outcome = int(rng.integers(2)) if rng is not None else 0
        row = n + int(stab_hits[0])
        collapse(self.x, self.z, self.r, row, anti, n)
        self.x[row] = p.a
        self.z[row] = p.b
        self.r[row] = (outcome + p.phase // 2) % 2
        return int(outcome), False

    def measure(self, qubit, basis='Z', outcome=None, rng=None):
        self._check(qubit)
        return self.measure_pauli(PauliOperator.single(basis, qubit, self.n), outcome, rng)

    def _row(self, k):
        return PauliOperator(self.x[k], self.z[k], 2 * int(self.r[k]))

    @property
    def generators(self):
        return [self._row(k) for k in range(self.n, 2 * self.n)]

    @property
    def destabilizers(self):
        return [self._row(k) for k in range(self.n)]

    def tensor(self, other):
        """Block-diagonal product: self on the first qubits, other after them."""
        n1, n2 = self.n, other.n
        n = n1 + n2
        x = np.zeros((2 * n + 1, n), dtype=np.uint8)
        z = np.zeros((2 * n + 1, n), dtype=np.uint8)
        r = np.zeros(2 * n + 1, dtype=np.uint8)
        for src, offset, (d_at, s_at) in ((self, 0, (0, n)), (other, n1, (n1, n + n1))):
            m = src.n
            x[d_at:d_at + m, offset:offset + m] = src.x[:m]
            z[d_at:d_at + m, offset:offset + m] = src.z[:m]
            r[d_at:d_at + m] = src.r[:m]
            x[s_at:s_at + m, offset:offset + m] = src.x[m:2 * m]
            z[s_at:s_at + m, offset:offset + m] = src.z[m:2 * m]
            r[s_at:s_at + m] = src.r[m:2 * m]
        return StabilizerTableau(x, z, r)

    def check_invariants(self):
        n = self.n
        x = self.x[:2 * n].astype(np.int64)
        z = self.z[:2 * n].astype(np.int64)
        omega = (x @ z.T + z @ x.T) & 1
        expected = np.zeros((2 * n, 2 * n), dtype=np.int64)
        idx = np.arange(n)
        expected[idx, n + idx] = 1
        expected[n + idx, idx] = 1
        return bool(np.array_equal(omega, expected))

    def dump(self):
        return '\n'.join(g.to_string() for g in self.generators)

    def __repr__(self):
        return f'<StabilizerTableau n={self.n}>'


@dataclass
class MeasurementEntry:
    label: str
    basis: str
    outcome: int
    deterministic: bool

    def to_dict(self):
        return {'label': self.label, 'basis': self.basis,
                'outcome': self.outcome, 'deterministic': self.deterministic}


@dataclass
class MeasurementRecord:
    entries: list = field(default_factory=list)

    def append(self, label, basis, outcome, deterministic):
        self.entries.append(MeasurementEntry(label, basis, int(outcome), bool(deterministic)))

    def outcomes(self, prefix):
        """Outcome bits of the entries labelled prefix[0], prefix[1], ... in order."""
        head = f'{prefix}['
        return [e.outcome for e in self.entries if e.label.startswith(head)]

    def __len__(self):
        return len(self.entries)

    def to_dict(self):
        return [e.to_dict() for e in self.entries]
