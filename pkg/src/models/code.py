from dataclasses import dataclass
from functools import cached_property

from src.errors import DimensionMismatch, RankDeficient
from src.models.bitmatrix import BitMatrix
from src.services import gf2core


@dataclass(frozen=True, eq=False)
class CssCode:
    """[[n, k]] CSS code given by X and Z stabilizer generators and logical representatives"""
    n: int
    k: int
    hx: BitMatrix
    hz: BitMatrix
    logical_x: BitMatrix
    logical_z: BitMatrix
    mapping_a: BitMatrix
    name: str = 'code'

    # Classical spaces: C1 = hz^perp, C2 = hx^perp, C2^perp = span(hx), C1^perp = span(hz)

    @cached_property
    def c1(self):
        return gf2core.dual_basis(self.hz) if self.hz.rows else BitMatrix.identity(self.n)

    @cached_property
    def c2(self):
        return gf2core.dual_basis(self.hx) if self.hx.rows else BitMatrix.identity(self.n)

    @property
    def c2_perp(self):
        return self.hx

    @property
    def c1_perp(self):
        return self.hz

    @cached_property
    def is_symmetric(self):
        return gf2core.same_span(self.hx, self.hz)

    def validate(self):
        for label, m in (('hx', self.hx), ('hz', self.hz),
                         ('logical_x', self.logical_x), ('logical_z', self.logical_z)):
            if m.cols != self.n:
                raise DimensionMismatch(f'{label} has {m.cols} columns, expected {self.n}')
        if self.logical_x.rows != self.k or self.logical_z.rows != self.k:
            raise DimensionMismatch(f'expected {self.k} logical rows')
        if self.hx.rows and self.hz.rows and not (self.hx @ self.hz.T).is_zero():
            raise RankDeficient('X and Z stabilizers do not commute')
        if gf2core.rank(self.hx) + gf2core.rank(self.hz) != self.n - self.k:
            raise RankDeficient('stabilizer ranks do not add up to n - k')
        if self.k:
            if self.hz.rows and not (self.logical_x @ self.hz.T).is_zero():
                raise RankDeficient('logical X anticommutes with a Z stabilizer')
            if self.hx.rows and not (self.logical_z @ self.hx.T).is_zero():
                raise RankDeficient('logical Z anticommutes with an X stabilizer')
            if self.logical_x @ self.logical_z.T != BitMatrix.identity(self.k):
                raise RankDeficient('logical operators are not symplectically paired')
        return self

    def to_dict(self):
        return {
            'name': self.name,
            'n': self.n,
            'k': self.k,
            'hx': [list(s) for s in self.hx.supports()],
            'hz': [list(s) for s in self.hz.supports()],
            'logical_x': [list(s) for s in self.logical_x.supports()],
            'logical_z': [list(s) for s in self.logical_z.supports()],
            'symmetric': self.is_symmetric,
        }

    def __repr__(self):
        return f'<CssCode {self.name} [[{self.n},{self.k}]]>'


@dataclass(frozen=True, eq=False)
class TriorthogonalCode:
    base: CssCode
    g: BitMatrix
    g1: BitMatrix
    g0: BitMatrix
    m: int

    @property
    def n(self):
        return self.base.n

    @property
    def k(self):
        return self.base.k

    def to_dict(self):
        data = self.base.to_dict()
        data.update({'m': self.m, 'g': self.g.to_dict()['matrix']})
        return data

    def __repr__(self):
        return f'<TriorthogonalCode [[{self.n},{self.k}]] m={self.m}>'


@dataclass(frozen=True)
class CodeParameters:
    n: int
    k: int
    d: int
    dx: int
    dz: int

    def to_dict(self):
        return {'n': self.n, 'k': self.k, 'd': self.d, 'dx': self.dx, 'dz': self.dz}
