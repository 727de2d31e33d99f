import numpy as np
import pytest

from src.errors import ForcedContradiction, IndexOutOfRange, InvalidLabel
from src.models.bitmatrix import BitVector
from src.models.pauli import PauliOperator
from src.models.tableau import MeasurementRecord, StabilizerTableau
from src.services import stabsim


def P(text):
    return PauliOperator.from_string(text)


def test_pauli_products_track_phase():
    assert P('X') * P('Z') == P('-iY')
    assert P('Z') * P('X') == P('iY')
    assert P('XX').commutes_with(P('ZZ'))
    assert not P('XI').commutes_with(P('ZI'))
    assert P('-XIZ').to_string() == '-XIZ'
    assert P('XYZI').weight == 3


def test_bell_state():
    t = StabilizerTableau.zero_state(2)
    t.h(0)
    t.cnot(0, 1)
    assert t.expectation(P('XX')) == 1
    assert t.expectation(P('ZZ')) == 1
    assert t.expectation(P('YY')) == -1
    assert t.expectation(P('ZI')) == 0
    assert t.check_invariants()


def test_measurement_collapses_and_forces():
    t = StabilizerTableau.zero_state(2)
    t.h(0)
    t.cnot(0, 1)
    outcome, deterministic = t.measure(0, 'Z', outcome=1)
    assert (outcome, deterministic) == (1, False)
    again, deterministic = t.measure(1, 'Z')
    assert (again, deterministic) == (1, True)
    with pytest.raises(ForcedContradiction):
        t.measure(1, 'Z', outcome=0)


def test_random_outcomes_follow_the_seed():
    outcomes = []
    for _ in range(2):
        policy = stabsim.RandomOutcome(seed=11)
        t = stabsim.zero_state(6)
        row = []
        for q in range(6):
            t = stabsim.apply_gate(t, 'H', q)
            t, bit, _ = stabsim.measure(t, q, 'Z', policy)
            row.append(bit)
        outcomes.append(row)
    assert outcomes[0] == outcomes[1]


def test_gates_compose_to_the_same_state():
    t = stabsim.apply_gate(stabsim.zero_state(1), 'H', 0)
    twice_s = stabsim.apply_gate(stabsim.apply_gate(t, 'S', 0), 'S', 0)
    assert stabsim.same_state(twice_s, stabsim.apply_gate(t, 'Z', 0))
    assert not stabsim.same_state(twice_s, t)

    a = stabsim.apply_gate(stabsim.apply_gate(stabsim.zero_state(2), 'H', 0), 'H', 1)
    cz = stabsim.apply_gate(a, 'CZ', 0, 1)
    via = stabsim.apply_gate(stabsim.apply_gate(stabsim.apply_gate(a, 'H', 1), 'CNOT', 0, 1),
                             'H', 1)
    assert stabsim.same_state(cz, via)


def test_reset_returns_to_zero():
    t = stabsim.apply_gate(stabsim.zero_state(1), 'X', 0)
    assert stabsim.expectation(stabsim.reset(t, 0), P('Z')) == 1
    t = stabsim.apply_gate(stabsim.zero_state(1), 'H', 0)
    assert stabsim.expectation(stabsim.reset(t, 0), P('Z')) == 1


def test_bad_arguments():
    t = stabsim.zero_state(2)
    with pytest.raises(IndexOutOfRange):
        stabsim.apply_gate(t, 'CNOT', 0, 0)
    with pytest.raises(IndexOutOfRange):
        stabsim.apply_gate(t, 'H', 5)
    with pytest.raises(InvalidLabel):
        stabsim.apply_gate(t, 'T', 0)
    with pytest.raises(InvalidLabel):
        stabsim.measure(t, 0, 'Y', stabsim.RandomOutcome(0))


def _logical(code, letter):
    row = (code.logical_x if letter == 'X' else code.logical_z).row(0)
    maker = PauliOperator.x_type if letter == 'X' else PauliOperator.z_type
    return maker(row.support, code.n)


@pytest.mark.parametrize('label,letter,sign', [
    ('0', 'Z', 1), ('1', 'Z', -1), ('+', 'X', 1), ('-', 'X', -1),
])
def test_encoded_states(qt, qsym, label, letter, sign):
    for code in (qt.base, qsym):
        t = stabsim.encode_logical(code, [label])
        for row in code.hz:
            assert stabsim.is_stabilized_by(t, PauliOperator.z_type(row.support, code.n))
        for row in code.hx:
            assert stabsim.is_stabilized_by(t, PauliOperator.x_type(row.support, code.n))
        assert stabsim.expectation(t, _logical(code, letter)) == sign


def test_encoded_cache_returns_copies(qt):
    a = stabsim.encoded(qt.base, ['0'])
    a.x_gate(0)
    b = stabsim.encoded(qt.base, ['0'])
    assert not stabsim.same_state(a, b)
    assert stabsim.same_state(b, stabsim.encode_logical(qt.base, ['0']))


def test_transversal_h_is_logical_h_on_the_symmetric_code(qsym):
    t = stabsim.encode_logical(qsym, ['0'])
    for q in range(qsym.n):
        t.h(q)
    assert stabsim.same_state(t, stabsim.encode_logical(qsym, ['+']))


def test_logical_readout_corrects_flips(qt):
    code = qt.base
    word = np.zeros(code.n, dtype=np.uint8)
    word[[q - 1 for q in code.logical_x.row(0).support]] = 1
    bits, syndrome = stabsim.logical_readout(word, code, 'Z')
    assert bits == [1] and not any(syndrome)
    word[5] ^= 1
    bits, syndrome = stabsim.logical_readout(word, code, 'Z')
    assert bits == [1] and any(syndrome)
    with pytest.raises(InvalidLabel):
        stabsim.logical_readout(word, code, 'Y')
    with pytest.raises(IndexOutOfRange):
        stabsim.logical_readout(word[:3], code, 'Z')


def test_measurement_record():
    record = MeasurementRecord()
    record.append('m0[0]', 'X', 1, False)
    record.append('m0[1]', 'X', 0, True)
    record.append('v0', 'Z', 1, False)
    assert record.outcomes('m0') == [1, 0]
    assert len(record) == 3
    assert record.to_dict()[2] == {'label': 'v0', 'basis': 'Z', 'outcome': 1,
                                   'deterministic': False}


def test_tensor_and_canonical_form():
    plus = stabsim.apply_gate(stabsim.zero_state(1), 'H', 0)
    joint = plus.tensor(stabsim.zero_state(1))
    assert joint.check_invariants()
    assert joint.expectation(P('XI')) == 1
    assert joint.expectation(P('IZ')) == 1
    assert len(joint.dump().splitlines()) == 2

    # same group, different generators
    bell = stabsim.apply_gate(stabsim.apply_gate(stabsim.zero_state(2), 'H', 0), 'CNOT', 0, 1)
    other = stabsim.apply_gate(stabsim.apply_gate(stabsim.zero_state(2), 'H', 1), 'CNOT', 1, 0)
    for a, b in zip(stabsim.canonicalize(bell), stabsim.canonicalize(other)):
        assert np.array_equal(a, b)
    assert stabsim.same_state(bell, other)


def _random_state(rng, n):
    t = stabsim.zero_state(n)
    names = sorted(stabsim.GATES)
    for _ in range(3 * n):
        name = names[int(rng.integers(len(names)))]
        if name in stabsim.TWO_QUBIT:
            if n < 2:
                continue
            a, b = rng.choice(n, size=2, replace=False)
            getattr(t, stabsim.GATES[name])(int(a), int(b))
        else:
            getattr(t, stabsim.GATES[name])(int(rng.integers(n)))
    return t


def test_gates_are_undone_by_their_inverses():
    rng = np.random.default_rng(21)
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        t = _random_state(rng, n)
        assert t.check_invariants()
        for name in ('H', 'S', 'SDG', 'CNOT', 'CZ'):
            if name in stabsim.TWO_QUBIT:
                if n < 2:
                    continue
                qubits = tuple(int(q) for q in rng.choice(n, size=2, replace=False))
            else:
                qubits = (int(rng.integers(n)),)
            there = stabsim.apply_gate(t, name, *qubits)
            back = stabsim.apply_gate(there, stabsim.INVERSE[name], *qubits)
            assert stabsim.same_state(back, t), (name, qubits)


def test_stabilizer_elements_leave_the_code_state_alone(qt):
    code = qt.base
    t = stabsim.encode_logical(code, ['+'])
    elements = [PauliOperator.x_type(row.support, code.n) for row in code.hx]
    elements += [PauliOperator.z_type(row.support, code.n) for row in code.hz]
    elements.append(elements[0] * elements[1] * elements[-1])
    for p in elements:
        assert stabsim.same_state(stabsim.apply_pauli(t, p), t)
    assert stabsim.same_state(stabsim.apply_pauli(t, _logical(code, 'X')), t)
    flipped = stabsim.apply_pauli(t, _logical(code, 'Z'))
    assert stabsim.same_state(flipped, stabsim.encode_logical(code, ['-']))


def test_x_error_syndrome_matches_the_parity_checks(qt):
    code = qt.base
    error = BitVector.from_support((1, 2), code.n)
    t = stabsim.apply_pauli(stabsim.encode_logical(code, ['0']),
                            PauliOperator.x_type(error.support, code.n))
    expected = code.hz @ error
    assert expected.weight > 0
    measured = [int(stabsim.expectation(t, PauliOperator.z_type(row.support, code.n)) == -1)
                for row in code.hz]
    assert measured == [int(b) for b in expected.bits]
