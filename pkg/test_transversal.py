import pytest

from src.errors import DimensionMismatch
from src.models.bitmatrix import BitMatrix
from src.services import csscodes, gf2core, transversal


def test_example_pair(qt, qsym):
    report = transversal.check_pair(qt.base, qsym)
    assert report.cnot_forward
    assert not report.cnot_backward
    assert report.cz
    assert report.all_true
    backward = [w for w in report.witnesses if w['direction'] == 'backward']
    assert {w['condition'] for w in backward} >= {'x_stabilizers_contained'}


def test_triorthogonal_code_is_cz_transversal_with_itself(qt):
    assert transversal.check_cnot(qt.base, qt.base)
    assert transversal.check_cz_sufficient(qt.base, qt.base)


def test_exact_cz_agrees_with_exhaustive_oracle(qt, qsym):
    assert transversal.check_cz_exact(qt.base, qsym)
    assert transversal.check_cz_exact(qt.base, qsym, exhaustive=True)
    assert transversal.check_pair(qt.base, qsym, exact_cz=True).cz


def test_symmetric_code_does_not_control_the_triorthogonal_one(qt, qsym):
    witnesses = transversal.cnot_witnesses(qsym, qt.base)
    vectors = [v for w in witnesses if w['condition'] == 'x_stabilizers_contained'
               for v in w['vectors']]
    assert vectors
    for support in vectors:
        row = BitMatrix.from_supports([support], qt.n).row(0)
        assert not gf2core.in_span(qt.base.hx, row)


def test_size_mismatch(qt):
    small = csscodes.build_triorthogonal_code(
        BitMatrix.parse('1110\n'), 'small').base
    with pytest.raises(DimensionMismatch):
        transversal.check_cnot(qt.base, small)
