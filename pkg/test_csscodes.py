from itertools import combinations

import numpy as np
import pytest

from conftest import CANONICAL_B, G1_SUPPORT
from src.errors import NotTriorthogonal, OddDeficiency, ParseError, RankDeficient
from src.models.bitmatrix import BitMatrix
from src.services import csscodes, gf2core


def test_triorthogonality(g):
    assert csscodes.is_triorthogonal(g)
    bad = BitMatrix.parse('1100\n0110\n')
    violations = csscodes.triorthogonality_violations(bad)
    assert violations['pairs'] == [(1, 2)]
    with pytest.raises(NotTriorthogonal):
        csscodes.build_triorthogonal_code(bad)


def test_triple_overlap_violation():
    m = BitMatrix.parse('110001\n101010\n011100\n')
    # every pair overlaps on one qubit
    assert csscodes.triorthogonality_violations(m)['pairs']
    m = BitMatrix.parse('11110000\n11001100\n10101010\n')
    assert csscodes.triorthogonality_violations(m) == {'pairs': [], 'triples': [(1, 2, 3)]}


def test_example_code(qt, g0):
    assert (qt.n, qt.k, qt.m) == (15, 1, 4)
    code = qt.base
    assert gf2core.same_span(code.hx, g0)
    assert code.hz.rows == 10
    assert code.logical_x.supports() == [G1_SUPPORT]
    assert code.logical_z.supports() == [(1, 2, 15)]
    assert csscodes.is_x_transversal(qt)
    params = csscodes.code_parameters(code)
    assert (params.dx, params.dz, params.d) == (7, 3, 3)


def test_rank_deficient_matrix_is_rejected():
    text = '111111110000000\n111111110000000\n100101100110100\n'
    with pytest.raises(RankDeficient):
        csscodes.build_triorthogonal_code(BitMatrix.parse(text))


def test_canonical_symmetric_companion(qt, qsym, g0):
    assert qsym.is_symmetric
    assert qsym.hx.rows == 7
    expected = BitMatrix.vstack(g0, BitMatrix.from_supports(CANONICAL_B, 15))
    assert gf2core.same_span(qsym.hx, expected)
    assert qsym.logical_x.supports() == [(9, 10, 15)]
    assert qsym.logical_z.supports() == [(9, 10, 15)]
    params = csscodes.code_parameters(qsym)
    assert (params.n, params.k, params.dx, params.dz) == (15, 1, 3, 3)


def test_published_generators_span_the_same_code(qsym, g):
    published = BitMatrix.from_supports([(2, 3, 5, 8), (9, 11, 14), (9, 10, 15)], 15)
    c3 = BitMatrix.vstack(g, published)
    assert gf2core.rank(c3) == 8
    assert gf2core.same_span(c3, BitMatrix.vstack(qsym.hx, qsym.logical_x))


def test_generating_several_companions(qt):
    codes = csscodes.generate_symmetric_codes(qt, limit=3)
    assert [c.name for c in codes] == ['qsym', 'qsym-1', 'qsym-2']
    spans = [frozenset(map(bytes, gf2core.span_elements(c.hx))) for c in codes]
    assert len(set(spans)) == 3


def test_odd_deficiency():
    qt = csscodes.build_triorthogonal_code(BitMatrix.parse('1110\n'))
    assert (qt.n, qt.k) == (4, 1)
    with pytest.raises(OddDeficiency):
        csscodes.generate_symmetric_codes(qt, limit=1)


def test_bundles(qt, qsym, data_path):
    loaded = csscodes.read_bundle(data_path('example15_qt.bundle'), 'qt')
    assert loaded.logical_x == qt.base.logical_x
    assert loaded.logical_z == qt.base.logical_z
    assert gf2core.same_span(loaded.hz, qt.base.hz)

    shipped = csscodes.read_bundle(data_path('example15_sym.bundle'), 'qsym')
    assert gf2core.same_span(shipped.hx, qsym.hx)

    text = csscodes.format_bundle(qsym)
    again = csscodes.load_bundle(text, 'qsym')
    assert again.hx == qsym.hx and again.logical_z == qsym.logical_z


def test_bundle_without_logicals_computes_them(qsym):
    text = '[HX]\n{0}\n[HZ]\n{0}\n'.format(qsym.hx.to_text())
    code = csscodes.load_bundle(text)
    assert code.k == 1
    assert code.logical_x.row(0).weight == 3
    assert code.logical_x.row(0).dot(code.logical_z.row(0)) == 1


def test_bundle_keeps_a_given_logical_z(qsym):
    # {9,10,15} times the stabilizer {1,2,3,4}
    lz = '111100001100001'
    text = '[HX]\n{0}\n[HZ]\n{1}\n[LZ]\n{2}\n'.format(qsym.hx.to_text(), qsym.hz.to_text(), lz)
    code = csscodes.load_bundle(text)
    assert code.logical_z.supports() == [(1, 2, 3, 4, 9, 10, 15)]
    assert code.logical_x.row(0).dot(code.logical_z.row(0)) == 1
    assert code.logical_x.row(0).weight == 3


@pytest.mark.parametrize('text', [
    '[G]\n1110\n[HX]\n1111\n',
    '[HX]\n1111\n',
    '[Q]\n1111\n',
    '',
    '[HX]\n1111\n[HZ]\n111\n',
])
def test_malformed_bundles(text):
    with pytest.raises(ParseError):
        csscodes.load_bundle(text)


def _even_overlaps(bits):
    rows = range(len(bits))
    pairs = all(int(bits[i] @ bits[j]) % 2 == 0 for i, j in combinations(rows, 2))
    triples = all(int((bits[i] & bits[j] & bits[k]).sum()) % 2 == 0
                  for i, j, k in combinations(rows, 3))
    return pairs and triples


def test_single_bit_flips_of_the_example_matrix(g):
    rejected = 0
    for r in range(g.rows):
        for c in range(g.cols):
            bits = g.bits.astype(np.int64)
            bits[r, c] ^= 1
            mutant = BitMatrix.from_rows(list(bits))
            assert csscodes.is_triorthogonal(mutant) == _even_overlaps(bits)
            rejected += not _even_overlaps(bits)
    assert rejected > 0


def test_many_distinct_companions(qt):
    codes = csscodes.generate_symmetric_codes(qt, limit=16)
    assert len(codes) >= 8
    for code in codes:
        params = csscodes.code_parameters(code)
        assert (params.n, params.k) == (15, 1)
        assert params.d >= 3
