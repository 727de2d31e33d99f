import pytest

from src.errors import (
    ForcedContradiction, MalformedCondition, ParseError, UndecodableSyndrome, UnsupportedKind,
)
from src.models.circuit import (
    Block, Circuit, Condition, ConditionalPauli, MeasureBlock, ProtocolKind, TransversalGate,
    parse_circuit,
)
from src.models.pauli import PauliOperator
from src.services import circuits
from src.services.decoders import DecoderPolicy

SWITCHING = [
    'hadamard-cz', 'teleport-t-to-sym', 'teleport-sym-to-t', 'hadamard-cz-merged',
    'teleport-t-to-sym-ec', 'teleport-sym-to-t-ec',
]
LABELS = ['0', '1', '+', '-']
PREPARATIONS = ['prep-plus-qt-verified', 'prep-zero-sym', 'prep-plus-sym']


def _state(circuit, outcome):
    return circuits.output_logical_state(outcome, circuit.code_of(outcome.output_block))


def test_protocol_kind_parsing():
    assert ProtocolKind.parse('HadamardCZ') is ProtocolKind.HADAMARD_CZ
    assert ProtocolKind.parse('teleport-t-to-sym-ec') is ProtocolKind.TELEPORT_T_TO_SYM_EC
    assert ProtocolKind.parse('PREP_ZERO_SYM') is ProtocolKind.PREP_ZERO_SYM
    with pytest.raises(UnsupportedKind):
        ProtocolKind.parse('magic')


def test_condition_precedence():
    c = Condition('a ^ b & c | d[1]')
    assert c.labels() == [('a', None), ('b', None), ('c', None), ('d', 1)]
    values = {'a': 1, 'b': 1, 'c': 0}
    assert c.evaluate(lambda name, index: values.get(name, index)) == 1
    assert c.evaluate(lambda name, index: {'a': 1, 'b': 1, 'c': 1}.get(name, 0)) == 0
    assert Condition('(a|b)') == Condition('a | b')
    for bad in ('a ^', '(a', 'a b', '', 'a + b'):
        with pytest.raises(MalformedCondition):
            Condition(bad)


def test_extra_verification_generators(qt, qsym):
    extra = circuits.extra_verification_generators(qt, qsym)
    assert extra.supports() == [(1, 2, 9, 10), (1, 3, 9, 11), (1, 5, 9, 13)]


def test_text_format_round_trips(qt, qsym):
    circuit = circuits.build_protocol('teleport-t-to-sym-ec', qt, qsym, with_prep=True)
    text = circuit.to_text()
    assert 'PREP a1 + cost=32 extra=1 source=published @prep' in text
    assert 'RECOVER X a2 <- s0 @ec' in text
    parsed = parse_circuit(text, circuit.codes)
    assert parsed.to_text() == text
    assert parsed.output_block == 'a2'


def test_validation_rejects_bad_circuits(qt):
    codes = {'qt': qt.base}
    with pytest.raises(ParseError):
        parse_circuit('BLOCK data code=qt role=input\nTCZ data anc\n', codes)
    with pytest.raises(ParseError):
        parse_circuit('BLOCK f qubits=1\nCNOT f[0] f[1]\n', codes)
    with pytest.raises(MalformedCondition):
        parse_circuit('BLOCK data code=qt\nCPAULI (m0) X_L data\nMEASX data -> m0\n', codes)
    with pytest.raises(MalformedCondition):
        parse_circuit('BLOCK data code=qt\nMEASX data -> m0\nRECOVER Z data <- m0\n', codes)
    with pytest.raises(ParseError):
        parse_circuit('BLOCK data code=nope\n', codes)
    circuit = Circuit([Block('data', 15, 'qt')],
                      [MeasureBlock('data', 'X', 'm0'),
                       ConditionalPauli(Condition('m0'), 'Z_L', 'data')], codes)
    assert circuit.validate() is circuit


@pytest.mark.parametrize('text', [
    'BLOCK f qubits=2\nFOO f[0] f[1]\n',
    'BLOCK f qubits=2\nCNOT f[0]\n',
    'BLOCK f qubits=1\nH f[0] f[0]\n',
    'BLOCK data code=qt\nBLOCK f qubits=1\nTCZ data f\n',
    'BLOCK data code=qt\nBLOCK anc code=qt\nTH data anc\n',
    'BLOCK data code=qt\nTCNOT data\n',
])
def test_gate_names_and_arity_are_checked(qt, text):
    with pytest.raises(ParseError):
        parse_circuit(text, {'qt': qt.base})


def test_unknown_transversal_gate_is_rejected(qt):
    circuit = Circuit([Block('data', 15, 'qt')], [TransversalGate('S', 'data')],
                      {'qt': qt.base})
    with pytest.raises(ParseError):
        circuit.validate()


def test_single_code_protocols_need_no_companion(qt):
    circuit = circuits.build_protocol(ProtocolKind.HADAMARD_CZ, qt.base)
    assert set(circuit.codes) == {'qt'}
    with pytest.raises(UnsupportedKind):
        circuits.build_protocol('teleport-t-to-sym', qt.base)


@pytest.mark.parametrize('kind', SWITCHING)
@pytest.mark.parametrize('label', LABELS)
def test_logical_action_on_every_branch(qt, qsym, kind, label):
    circuit = circuits.build_protocol(kind, qt, qsym)
    expected = circuits.expected_label(circuit, label)
    for bit in (0, 1):
        outcome = circuits.run(circuit, seed=bit, forced_outcomes={'m0': bit}, input_label=label)
        assert outcome.accepted
        assert outcome.readouts['m0']['bits'] == [bit]
        state = _state(circuit, outcome)
        assert state['indefinite_stabilizers'] == 0
        assert circuits.logical_matches(state, expected), (kind, label, bit, state)
        fired = [f for f in outcome.feedback if 'pauli' in f]
        assert fired[-1]['applied'] == bool(bit)


@pytest.mark.parametrize('label', LABELS)
def test_steane_ec_keeps_the_state(qt, qsym, label):
    for code in ('qt', 'qsym'):
        circuit = circuits.build_protocol('steane-ec', qt, qsym, ec_code=code)
        outcome = circuits.run(circuit, seed=7, input_label=label)
        assert outcome.accepted
        assert circuits.logical_matches(_state(circuit, outcome), label)


@pytest.mark.parametrize('kind', SWITCHING)
def test_preparation_circuits_accept_clean_runs(qt, qsym, kind):
    circuit = circuits.build_protocol(kind, qt, qsym, with_prep=True)
    for label in ('0', '+'):
        outcome = circuits.run(circuit, seed=3, input_label=label)
        assert outcome.accepted
        verdict = circuits.judge(outcome, circuit, label)
        assert verdict == {'status': 'corrected', 'residual_weight': 0}


@pytest.mark.parametrize('kind,label', [
    ('prep-plus-qt-verified', '+'), ('prep-zero-sym', '0'), ('prep-plus-sym', '+'),
])
def test_state_preparations(qt, qsym, kind, label):
    circuit = circuits.build_protocol(kind, qt, qsym)
    outcome = circuits.run(circuit, seed=1)
    assert outcome.accepted
    assert circuits.expected_label(circuit, '0') == label
    assert circuits.logical_matches(_state(circuit, outcome), label)


@pytest.mark.parametrize('kind', SWITCHING + ['steane-ec'] + PREPARATIONS)
def test_seeded_runs_keep_the_logical_action(qt, qsym, kind):
    circuit = circuits.build_protocol(kind, qt, qsym)
    prepares = kind in PREPARATIONS
    for seed in range(20):
        label = LABELS[seed % len(LABELS)]
        if prepares:
            outcome = circuits.run(circuit, seed=seed)
        else:
            outcome = circuits.run(circuit, seed=seed, input_label=label)
        assert outcome.accepted, (kind, seed)
        verdict = circuits.judge(outcome, circuit, label)
        assert verdict == {'status': 'corrected', 'residual_weight': 0}, (kind, seed)
        expected = circuits.expected_label(circuit, label)
        assert circuits.logical_matches(_state(circuit, outcome), expected), (kind, seed)


def test_synthesized_encoder_matches_published_preparation(qt, qsym):
    published = circuits.build_protocol('teleport-t-to-sym-ec', qt, qsym, with_prep=True)
    synth = circuits.build_protocol('teleport-t-to-sym-ec', qt, qsym, with_prep=True,
                                    encoder='synthesized')
    assert 'PREP' not in synth.to_text()
    for circuit in (published, synth):
        outcome = circuits.run(circuit, seed=5, input_label='+')
        assert circuits.judge(outcome, circuit, '+')['status'] == 'corrected'
    encoder = circuits.synthesize_encoding_circuit(qt.base, '+')
    assert encoder.metadata['two_qubit_gates'] > 0
    assert encoder.metadata['label'] == '+'


def test_data_error_is_copied_and_recovered(qt, qsym):
    circuit = circuits.build_protocol('teleport-t-to-sym-ec', qt, qsym)
    error = PauliOperator.x_type([3, 8], 15)
    outcome = circuits.run(circuit, seed=2, injected_errors=[(0, error, 'data')],
                           input_label='0')
    assert outcome.readouts['s0']['syndrome'] != [0] * 10
    recover = [f for f in outcome.feedback if 'recover' in f]
    assert recover[0]['support'] == [3, 8]
    assert circuits.judge(outcome, circuit, '0')['status'] == 'corrected'


def test_capacity_limited_decoder_gives_up(qt, qsym):
    circuit = circuits.build_protocol('teleport-t-to-sym-ec', qt, qsym)
    error = PauliOperator.x_type([3, 8], 15)
    with pytest.raises(UndecodableSyndrome):
        circuits.run(circuit, seed=2, injected_errors=[(0, error, 'data')],
                     policy=DecoderPolicy.named('baseline'))


def test_verification_discards_flagged_ancilla(qt, qsym):
    circuit = circuits.build_protocol('prep-plus-qt-verified', qt, qsym)
    position = circuit.metadata['prepared_at']['anc']
    flagged = circuits.run(circuit, seed=0,
                           injected_errors=[(position, PauliOperator.x_type([2], 15), 'anc')])
    assert not flagged.accepted
    assert flagged.discarded_at is not None
    passed = circuits.run(circuit, seed=0,
                          injected_errors=[(position, PauliOperator.x_type([4], 15), 'anc')])
    assert passed.accepted


def test_forced_contradiction_on_deterministic_readout(qt, qsym):
    circuit = parse_circuit('BLOCK data code=qt role=input\nMEASZ data -> m0\n', {'qt': qt.base})
    assert circuits.run(circuit, seed=0, forced_outcomes={'m0': 0}).readouts['m0']['bits'] == [0]
    with pytest.raises(ForcedContradiction):
        circuits.run(circuit, seed=0, forced_outcomes={'m0': 1})
    circuit = circuits.build_protocol('prep-zero-sym', qt, qsym)
    with pytest.raises(ForcedContradiction):
        circuits.run(circuit, seed=0, forced_outcomes={'v0': 1})


def test_live_blocks_skip_measured_and_unprepared(qt, qsym):
    circuit = circuits.build_protocol('teleport-t-to-sym-ec', qt, qsym, with_prep=True)
    start = [b.name for b in circuits.live_blocks(circuit, 0)]
    assert 'data' in start and 'a1' not in start
    end = [b.name for b in circuits.live_blocks(circuit, len(circuit.instructions))]
    assert 'a2' in end and 'data' not in end and 'a1' not in end
