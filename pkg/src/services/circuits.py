"""
Protocol construction and execution.

build_protocol turns a protocol kind and a code pair into a Circuit over
named blocks; ProtocolRunner executes it on one combined stabilizer tableau,
with injected Pauli errors, forced measurement branches and classical
feedback, and output_logical_state reads the logical state of the output
block after ideal decoding.
"""
import logging

import numpy as np

from src.errors import (
    IndexOutOfRange, InvalidLabel, MalformedCondition, PairNotTransversal, ParseError,
    UnsupportedKind,
)
from src.models.bitmatrix import BitMatrix, BitVector
from src.models.circuit import (
    Block, Circuit, Condition, ConditionalPauli, ExternalPrep, Gate, MeasureBlock,
    MeasureQubit, ProtocolKind, ProtocolOutcome, Recover, ResetBlock, TransversalGate,
    VerifyDiscard, parse_circuit,  # noqa: F401
)
from src.models.code import TriorthogonalCode
from src.models.pauli import PauliOperator
from src.models.tableau import MeasurementRecord
from src.services import csscodes, gf2core, stabsim, transversal
from src.services.decoders import DecoderPolicy

logger = logging.getLogger(__name__)

# Published preparation costs: (two-qubit gates, extra qubits beyond the block)
PUBLISHED_PREP = {
    ('qt', '+'): (32, 1),
    ('qsym', '0'): (19, 0),
}

HADAMARD_KINDS = (ProtocolKind.HADAMARD_CZ, ProtocolKind.HADAMARD_STEANE_MERGED)
PREP_KINDS = (ProtocolKind.PREP_PLUS_QT_VERIFIED, ProtocolKind.PREP_ZERO_SYM,
              ProtocolKind.PREP_PLUS_SYM)
SINGLE_CODE_KINDS = (ProtocolKind.HADAMARD_CZ, ProtocolKind.HADAMARD_STEANE_MERGED)
ENCODERS = ('published', 'synthesized')

_IDEAL = DecoderPolicy.minimum_weight()


def extra_verification_generators(qt, qsym):
    """Z-generators of qt completing span(hz of qsym) to span(hz of qt).

    Picked greedily as minimum-weight elements, ties to the lexicographically
    smallest support, each outside the span of everything chosen before.
    """
    base = qt.base if isinstance(qt, TriorthogonalCode) else qt
    if not gf2core.span_contains(base.hz, qsym.hz):
        raise PairNotTransversal('Z stabilizers of the symmetric code are not Z stabilizers of qt')
    elements = gf2core.span_elements(base.hz)
    elements = elements[elements.any(axis=1)]
    order = sorted(range(elements.shape[0]),
                   key=lambda i: (int(elements[i].sum()), gf2core.lex_key(elements[i])))
    chosen, current = [], qsym.hz
    target = gf2core.rank(base.hz)
    for i in order:
        if gf2core.rank(current) == target:
            break
        row = BitVector(elements[i])
        if not gf2core.in_span(current, row):
            chosen.append(row)
            current = BitMatrix.vstack(current, BitMatrix.from_rows([row], cols=base.n))
    return BitMatrix.from_rows(chosen, cols=base.n)


def synthesize_encoding_circuit(code, label):
    """H and CNOT circuit from |0...0> to the encoded label state, as a one-block Circuit."""
    labels = stabsim.normalize_labels(code, _labels_for(code, label))
    gates = stabsim.encoding_gates(code, labels)
    instructions = [Gate(name, tuple(('q', q) for q in qubits), phase='prep')
                    for name, *qubits in gates]
    two = sum(1 for name, *_ in gates if name in stabsim.TWO_QUBIT)
    return Circuit(
        blocks=[Block('q', code.n, 'code', None, 'output')],
        instructions=instructions,
        codes={'code': code},
        metadata={'kind': 'encoder', 'label': ''.join(labels), 'output_block': 'q',
                  'two_qubit_gates': two, 'single_qubit_gates': len(gates) - two},
    )


def _labels_for(code, label):
    if label is None:
        return None
    label = tuple(label)
    return label if len(label) == code.k else label * code.k


class _Builder:
    def __init__(self, codes, encoder):
        self.codes = codes
        self.encoder = encoder
        self.blocks = []
        self.instructions = []
        self.prepared_at = {}
        self._counters = {}

    def block(self, name, code=None, label=None, role='ancilla', size=None):
        size = self.codes[code].n if code else size
        self.blocks.append(Block(name, size, code, label, role))
        return name

    def add(self, ins):
        self.instructions.append(ins)
        return ins

    def label(self, prefix):
        index = self._counters.get(prefix, 0)
        self._counters[prefix] = index + 1
        return f'{prefix}{index}'

    def encode(self, block, code_name, label):
        """Encoder for a fresh block: published preparation where one exists."""
        published = PUBLISHED_PREP.get((code_name, label))
        if published and self.encoder == 'published':
            self.add(ExternalPrep(block, label, published[0], published[1], 'published'))
        else:
            sub = synthesize_encoding_circuit(self.codes[code_name], label)
            for g in sub.instructions:
                self.add(Gate(g.name, tuple((block, i) for _, i in g.targets), phase='prep'))
        self.prepared_at[block] = len(self.instructions)

    def verify(self, labels):
        self.add(VerifyDiscard(Condition('|'.join(labels)), phase='prep'))

    def circuit(self, metadata):
        metadata = dict(metadata)
        metadata['prepared_at'] = dict(self.prepared_at)
        return Circuit(self.blocks, self.instructions, self.codes, metadata).validate()


def _prep_plus_qt(b, block, extra):
    """Verified |+>_L of qt: encoder, then one reusable syndrome qubit per extra Z-generator."""
    syn = b.block(f'{block}_syn', size=1, role='flag')
    b.encode(block, 'qt', '+')
    labels = []
    for row in extra:
        b.add(ResetBlock(syn, '0', phase='prep'))
        for q in row.support:
            b.add(Gate('CNOT', ((block, q - 1), (syn, 0)), phase='prep'))
        label = b.label('v')
        b.add(MeasureQubit(syn, 0, 'Z', label, phase='prep'))
        labels.append(label)
    b.verify(labels)


def _prep_zero_sym(b, block, plus=False):
    """|0>_L of the symmetric code with a flag reading its logical Z; transversal H for |+>_L."""
    flag = b.block(f'{block}_flag', size=1, role='flag')
    b.encode(block, 'qsym', '0')
    for q in b.codes['qsym'].logical_z.row(0).support:
        b.add(Gate('CNOT', ((block, q - 1), (flag, 0)), phase='prep'))
    label = b.label('v')
    b.add(MeasureQubit(flag, 0, 'Z', label, phase='prep'))
    b.verify([label])
    if plus:
        b.add(TransversalGate('H', block, phase='prep'))


def _ancilla(b, name, code_name, label, with_prep, extra=None, role='ancilla'):
    if not with_prep:
        return b.block(name, code_name, label, role)
    b.block(name, code_name, None, role)
    if code_name == 'qt' and label == '+':
        _prep_plus_qt(b, name, extra)
    elif code_name == 'qsym' and label in '0+':
        _prep_zero_sym(b, name, plus=(label == '+'))
    else:
        b.encode(name, code_name, label)
    return name


def _require_pair(qt_code, qsym):
    report = transversal.check_pair(qt_code, qsym)
    if not (report.cnot_forward and report.cz):
        raise PairNotTransversal(
            f'{qt_code.name} and {qsym.name} do not support transversal switching',
            witnesses=report.witnesses)


def build_protocol(kind, qt, qsym=None, with_prep=False, encoder='published', ec_code='qt'):
    """Circuit realizing the protocol kind on the given code pair.

    Blocks are declared data first; measurement labels are m* for logical
    readouts, s* for syndrome words and v* for verification bits.
    """
    if isinstance(kind, str):
        kind = ProtocolKind.parse(kind)
    if encoder not in ENCODERS:
        raise UnsupportedKind(f'unknown encoder {encoder!r}')
    qt_code = qt.base if isinstance(qt, TriorthogonalCode) else qt
    needs_sym = kind not in SINGLE_CODE_KINDS and not (
        kind == ProtocolKind.STEANE_EC and ec_code == 'qt')
    if with_prep and kind in SINGLE_CODE_KINDS:
        # the verified |+>_L preparation checks the generators outside the companion code
        needs_sym = True
    if needs_sym and qsym is None:
        if not isinstance(qt, TriorthogonalCode):
            raise UnsupportedKind(f'{kind.title} needs a symmetric companion code')
        qsym = csscodes.generate_symmetric_codes(qt, limit=1)[0]
        logger.info('using canonical companion %s for %s', qsym.name, kind.title)
    codes = {'qt': qt_code}
    if qsym is not None:
        codes['qsym'] = qsym
        if needs_sym:
            _require_pair(qt_code, qsym)

    b = _Builder(codes, encoder)
    extra = extra_verification_generators(qt_code, qsym) if qsym is not None else None
    meta = {'kind': kind.value, 'with_prep': with_prep, 'encoder': encoder,
            'logical_action': 'hadamard' if kind in HADAMARD_KINDS else 'identity'}

    if kind == ProtocolKind.STEANE_EC:
        if ec_code not in codes:
            raise UnsupportedKind(f'unknown code {ec_code!r} for error correction')
        _steane_ec(b, ec_code, with_prep)
        meta.update(input_block='data', output_block='data', ec_code=ec_code,
                    verification='copy-comparison')

    elif kind == ProtocolKind.HADAMARD_CZ:
        b.block('data', 'qt', role='input')
        _ancilla(b, 'anc', 'qt', '+', with_prep, extra, role='output')
        b.add(TransversalGate('CZ', 'data', 'anc'))
        b.add(MeasureBlock('data', 'X', 'm0'))
        b.add(ConditionalPauli(Condition('m0'), 'X_L', 'anc'))
        meta.update(input_block='data', output_block='anc')

    elif kind == ProtocolKind.TELEPORT_T_TO_SYM:
        b.block('data', 'qt', role='input')
        _ancilla(b, 'anc', 'qsym', '0', with_prep, extra, role='output')
        b.add(TransversalGate('CNOT', 'data', 'anc'))
        b.add(MeasureBlock('data', 'X', 'm0'))
        b.add(ConditionalPauli(Condition('m0'), 'Z_L', 'anc'))
        meta.update(input_block='data', output_block='anc')

    elif kind == ProtocolKind.TELEPORT_SYM_TO_T:
        b.block('data', 'qsym', role='input')
        _ancilla(b, 'anc', 'qt', '+', with_prep, extra, role='output')
        b.add(TransversalGate('H', 'data'))
        b.add(TransversalGate('CZ', 'data', 'anc'))
        b.add(MeasureBlock('data', 'X', 'm0'))
        b.add(ConditionalPauli(Condition('m0'), 'X_L', 'anc'))
        meta.update(input_block='data', output_block='anc')

    elif kind == ProtocolKind.HADAMARD_STEANE_MERGED:
        b.block('data', 'qt', role='input')
        _ancilla(b, 'a1', 'qt', '+', with_prep, extra)
        _ancilla(b, 'a2', 'qt', '+', with_prep, extra, role='output')
        b.add(TransversalGate('CNOT', 'data', 'a1', phase='ec'))
        b.add(TransversalGate('CZ', 'data', 'a2'))
        b.add(MeasureBlock('a1', 'Z', 's0', 'syndrome', phase='ec'))
        b.add(MeasureBlock('data', 'X', 'm0'))
        b.add(Recover('a2', 's0', 'Z', phase='ec'))
        b.add(ConditionalPauli(Condition('m0'), 'X_L', 'a2'))
        meta.update(input_block='data', output_block='a2')

    elif kind == ProtocolKind.TELEPORT_T_TO_SYM_EC:
        b.block('data', 'qt', role='input')
        _ancilla(b, 'a1', 'qt', '+', with_prep, extra)
        _ancilla(b, 'a2', 'qsym', '0', with_prep, extra, role='output')
        b.add(TransversalGate('CNOT', 'data', 'a1', phase='ec'))
        b.add(TransversalGate('CNOT', 'data', 'a2'))
        b.add(MeasureBlock('a1', 'Z', 's0', 'syndrome', phase='ec'))
        b.add(MeasureBlock('data', 'X', 'm0'))
        b.add(Recover('a2', 's0', 'X', phase='ec'))
        b.add(ConditionalPauli(Condition('m0'), 'Z_L', 'a2'))
        meta.update(input_block='data', output_block='a2')

    elif kind == ProtocolKind.TELEPORT_SYM_TO_T_EC:
        b.block('data', 'qsym', role='input')
        _ancilla(b, 'a1', 'qsym', '+', with_prep, extra)
        _ancilla(b, 'a2', 'qt', '+', with_prep, extra, role='output')
        b.add(TransversalGate('H', 'data'))
        b.add(TransversalGate('CNOT', 'data', 'a1', phase='ec'))
        b.add(TransversalGate('CZ', 'data', 'a2'))
        b.add(MeasureBlock('a1', 'Z', 's0', 'syndrome', phase='ec'))
        b.add(MeasureBlock('data', 'X', 'm0'))
        b.add(Recover('a2', 's0', 'Z', phase='ec'))
        b.add(ConditionalPauli(Condition('m0'), 'X_L', 'a2'))
        meta.update(input_block='data', output_block='a2')

    elif kind == ProtocolKind.PREP_PLUS_QT_VERIFIED:
        b.block('anc', 'qt', role='output')
        _prep_plus_qt(b, 'anc', extra)
        meta.update(input_block='anc', output_block='anc', logical_action='prepare',
                    prepared_label='+',
                    extra_generators=[list(r.support) for r in extra])

    elif kind in (ProtocolKind.PREP_ZERO_SYM, ProtocolKind.PREP_PLUS_SYM):
        plus = kind == ProtocolKind.PREP_PLUS_SYM
        b.block('anc', 'qsym', role='output')
        _prep_zero_sym(b, 'anc', plus=plus)
        meta.update(input_block='anc', output_block='anc', logical_action='prepare',
                    prepared_label='+' if plus else '0')

    else:
        raise UnsupportedKind(f'no builder for {kind.title}')

    circuit = b.circuit(meta)
    logger.debug('built %s: %d blocks, %d instructions', kind.title,
                 len(circuit.blocks), len(circuit.instructions))
    return circuit


def _steane_ec(b, code, with_prep):
    """Steane extraction with eight verified ancilla blocks.

    |+>_L ancillas are checked twice for X errors (copy comparison) and once
    for Z errors; |0>_L ancillas twice for Z errors and once for X errors.
    """
    b.block('data', code, role='input')
    for names, label in ((('ax', 'ax_x', 'bx', 'bx_x'), '+'),
                         (('az', 'az_z', 'bz', 'bz_z'), '0')):
        for name in names:
            if with_prep:
                b.block(name, code)
                b.encode(name, code, label)
            else:
                b.block(name, code, label)

    b.add(TransversalGate('CNOT', 'ax', 'ax_x', phase='prep'))
    b.add(MeasureBlock('ax_x', 'Z', 'v0', 'syndrome', phase='prep'))
    b.add(TransversalGate('CNOT', 'bx', 'bx_x', phase='prep'))
    b.add(MeasureBlock('bx_x', 'Z', 'v1', 'syndrome', phase='prep'))
    b.add(TransversalGate('CNOT', 'bx', 'ax', phase='prep'))
    b.add(MeasureBlock('bx', 'X', 'v2', 'syndrome', phase='prep'))
    b.verify(['v0', 'v1', 'v2'])

    b.add(TransversalGate('CNOT', 'az_z', 'az', phase='prep'))
    b.add(MeasureBlock('az_z', 'X', 'v3', 'syndrome', phase='prep'))
    b.add(TransversalGate('CNOT', 'bz_z', 'bz', phase='prep'))
    b.add(MeasureBlock('bz_z', 'X', 'v4', 'syndrome', phase='prep'))
    b.add(TransversalGate('CNOT', 'az', 'bz', phase='prep'))
    b.add(MeasureBlock('bz', 'Z', 'v5', 'syndrome', phase='prep'))
    b.verify(['v3', 'v4', 'v5'])

    b.add(TransversalGate('CNOT', 'data', 'ax', phase='ec'))
    b.add(MeasureBlock('ax', 'Z', 'sx', 'syndrome', phase='ec'))
    b.add(TransversalGate('CNOT', 'az', 'data', phase='ec'))
    b.add(MeasureBlock('az', 'X', 'sz', 'syndrome', phase='ec'))
    b.add(Recover('data', 'sx', 'X', phase='ec'))
    b.add(Recover('data', 'sz', 'Z', phase='ec'))


def live_blocks(circuit, position):
    """Blocks holding quantum data at an instruction boundary."""
    prepared_at = circuit.metadata.get('prepared_at', {})
    measured = set()
    for ins in circuit.instructions[:position]:
        if isinstance(ins, MeasureBlock):
            measured.add(ins.block)
        elif isinstance(ins, ResetBlock):
            measured.discard(ins.block)
    return [b for b in circuit.blocks
            if b.name not in measured and position >= prepared_at.get(b.name, 0)]


class ProtocolRunner:
    """Executes one circuit repeatedly; initial states are cached per input label."""

    def __init__(self, circuit, policy=None):
        self.circuit = circuit
        self.policy = policy or DecoderPolicy.minimum_weight()
        self.slices = circuit.offsets()
        self.total = circuit.num_qubits
        self._initial = {}

    def _block_state(self, block, input_label):
        if block.code is None:
            t = stabsim.zero_state(block.size)
            if block.label == '+':
                for q in range(block.size):
                    t.h(q)
            return t
        label = input_label if block.role == 'input' else block.label
        code = self.circuit.codes[block.code]
        if label is None:
            return stabsim.zero_state(code.n)
        return stabsim.encoded(code, _labels_for(code, label))

    def initial_state(self, input_label='0'):
        if input_label not in self._initial:
            state = None
            for block in self.circuit.blocks:
                part = self._block_state(block, input_label)
                state = part if state is None else state.tensor(part)
            self._initial[input_label] = state
        return self._initial[input_label].copy()

    def _qubits(self, block):
        start, size = self.slices[block]
        return range(start, start + size)

    def _embed(self, block, pauli):
        start, size = self.slices[block]
        if pauli.n != size:
            raise IndexOutOfRange(f'{pauli.n}-qubit Pauli for block {block!r} of size {size}')
        return pauli.embed(start, self.total)

    def _logical(self, block, letter, index=0):
        code = self.circuit.code_of(block)
        start, _ = self.slices[block]
        if letter == 'X':
            row = code.logical_x.row(index)
            p = PauliOperator.x_type(row.support, code.n)
        else:
            row = code.logical_z.row(index)
            p = PauliOperator.z_type(row.support, code.n)
        return p.embed(start, self.total)

    def _schedule(self, injected_errors):
        pending = {}
        size = len(self.circuit.instructions)
        for position, pauli, block in injected_errors or ():
            if not 0 <= position <= size:
                raise IndexOutOfRange(f'injection position {position} outside 0..{size}')
            if block not in self.slices:
                raise ParseError(f'injection on unknown block {block!r}')
            pending.setdefault(position, []).append(self._embed(block, pauli))
        return pending

    def run(self, input_label='0', seed=None, injected_errors=(), forced_outcomes=None):
        circuit = self.circuit
        rng = np.random.default_rng(seed)
        forced = dict(forced_outcomes or {})
        pending = self._schedule(injected_errors)
        t = self.initial_state(input_label)
        record = MeasurementRecord()
        values, indexed, syndromes = {}, {}, {}
        readouts, feedback = {}, []

        def lookup(name, index):
            if name not in values:
                raise MalformedCondition(f'label {name!r} has not been measured')
            if index is None:
                return values[name]
            try:
                return indexed[name][index]
            except IndexError:
                raise MalformedCondition(f'label {name}[{index}] out of range')

        def finish(accepted, discarded_at=None):
            return ProtocolOutcome(
                accepted=accepted, tableau=t, record=record, feedback=feedback,
                output_block=circuit.output_block, block_slices=dict(self.slices),
                readouts=readouts, discarded_at=discarded_at)

        for position, ins in enumerate(circuit.instructions):
            for p in pending.get(position, ()):
                t.apply_pauli(p)

            if isinstance(ins, Gate):
                method = stabsim.GATES.get(ins.name)
                if method is None:
                    raise InvalidLabel(f'unknown gate {ins.name!r}')
                qubits = [self.slices[b][0] + i for b, i in ins.targets]
                getattr(t, method)(*qubits)

            elif isinstance(ins, TransversalGate):
                self._transversal(t, ins)

            elif isinstance(ins, MeasureBlock):
                code = circuit.code_of(ins.block)
                if ins.label in forced:
                    bits = forced[ins.label]
                    bits = bits if isinstance(bits, (list, tuple)) else [bits] * code.k
                    letter = 'X' if ins.basis == 'X' else 'Z'
                    for i, bit in enumerate(bits):
                        t.measure_pauli(self._logical(ins.block, letter, i), outcome=int(bit))
                word = []
                for i, q in enumerate(self._qubits(ins.block)):
                    outcome, det = t.measure(q, ins.basis, None, rng)
                    record.append(f'{ins.label}[{i}]', ins.basis, outcome, det)
                    word.append(outcome)
                error_type = 'X' if ins.basis == 'Z' else 'Z'
                decoder = self.policy.decoder(code, error_type)
                syndrome = decoder.syndrome(word)
                if ins.role == 'syndrome':
                    syndromes[ins.label] = (code, error_type, syndrome)
                    values[ins.label] = int(any(syndrome))
                    indexed[ins.label] = list(syndrome)
                    readouts[ins.label] = {'syndrome': list(syndrome)}
                else:
                    bits, _ = stabsim.logical_readout(word, code, ins.basis, decoder)
                    values[ins.label] = bits[0] if bits else 0
                    indexed[ins.label] = bits
                    readouts[ins.label] = {'bits': bits, 'syndrome': list(syndrome)}

            elif isinstance(ins, MeasureQubit):
                q = self.slices[ins.block][0] + ins.index
                outcome, det = t.measure(q, ins.basis, forced.get(ins.label), rng)
                record.append(ins.label, ins.basis, outcome, det)
                values[ins.label] = outcome
                indexed[ins.label] = [outcome]

            elif isinstance(ins, ConditionalPauli):
                fire = ins.condition.evaluate(lookup)
                if fire:
                    t.apply_pauli(self._logical(ins.block, ins.pauli[0], ins.logical_index))
                feedback.append({'position': position, 'pauli': ins.pauli, 'block': ins.block,
                                 'applied': bool(fire)})

            elif isinstance(ins, Recover):
                code, error_type, syndrome = syndromes[ins.source]
                correction = self.policy.decoder(code, error_type).decode(syndrome)
                if correction.weight:
                    start, size = self.slices[ins.block]
                    if size != correction.len:
                        raise IndexOutOfRange(
                            f'{correction.len}-qubit correction for block {ins.block!r}')
                    maker = PauliOperator.x_type if ins.pauli == 'X' else PauliOperator.z_type
                    t.apply_pauli(maker(correction.support, size).embed(start, self.total))
                feedback.append({'position': position, 'recover': ins.pauli, 'block': ins.block,
                                 'support': list(correction.support)})

            elif isinstance(ins, VerifyDiscard):
                if ins.condition.evaluate(lookup):
                    logger.debug('verification fired at instruction %d', position)
                    return finish(False, position)

            elif isinstance(ins, ResetBlock):
                self._reset(t, ins.block, ins.label)

            elif isinstance(ins, ExternalPrep):
                code = circuit.code_of(ins.block)
                start = self.slices[ins.block][0]
                gates = stabsim.encoding_gates(code, _labels_for(code, ins.label))
                for name, *qubits in gates:
                    getattr(t, stabsim.GATES[name])(*(start + q for q in qubits))

        for p in pending.get(len(circuit.instructions), ()):
            t.apply_pauli(p)
        return finish(True)

    def _transversal(self, t, ins):
        a_start, a_size = self.slices[ins.block_a]
        if ins.name == 'H':
            for i in range(a_size):
                t.h(a_start + i)
            return
        b_start, b_size = self.slices[ins.block_b]
        if a_size != b_size:
            raise IndexOutOfRange(f'transversal {ins.name} on blocks of size {a_size} and {b_size}')
        gate = t.cnot if ins.name == 'CNOT' else t.cz
        for i in range(a_size):
            gate(a_start + i, b_start + i)

    def _reset(self, t, block, label):
        for q in self._qubits(block):
            outcome, _ = t.measure(q, 'Z')
            if outcome:
                t.x_gate(q)
        b = self.circuit.block(block)
        start = self.slices[block][0]
        if b.code is None:
            if label == '+':
                for q in self._qubits(block):
                    t.h(q)
            return
        code = self.circuit.codes[b.code]
        for name, *qubits in stabsim.encoding_gates(code, _labels_for(code, label)):
            getattr(t, stabsim.GATES[name])(*(start + q for q in qubits))


def run(circuit, seed=None, injected_errors=(), forced_outcomes=None, input_label='0',
        policy=None):
    return ProtocolRunner(circuit, policy).run(input_label, seed, injected_errors,
                                               forced_outcomes)


def output_logical_state(outcome, code, block=None):
    """Signed logical expectations of a block after ideal decoding of its stabilizer signs.

    X_L/Z_L entries are +1, -1 or 0 (not determined). Undetermined stabilizer
    signs are reported and left out of the decoding.
    """
    block = block or outcome.output_block
    start, size = outcome.block_slices[block]
    t = outcome.tableau
    total = t.n

    def sign(p):
        return t.expectation(p.embed(start, total))

    z_signs = [sign(PauliOperator.z_type(row.support, size)) for row in code.hz]
    x_signs = [sign(PauliOperator.x_type(row.support, size)) for row in code.hx]
    indefinite = sum(1 for s in z_signs + x_signs if s == 0)
    x_error = _IDEAL.decoder(code, 'X').decode(tuple(int(s == -1) for s in z_signs))
    z_error = _IDEAL.decoder(code, 'Z').decode(tuple(int(s == -1) for s in x_signs))

    def corrected(value, flip):
        return -value if flip else value

    logical_z = [corrected(sign(PauliOperator.z_type(row.support, size)), x_error.dot(row))
                 for row in code.logical_z]
    logical_x = [corrected(sign(PauliOperator.x_type(row.support, size)), z_error.dot(row))
                 for row in code.logical_x]
    return {
        'X_L': logical_x,
        'Z_L': logical_z,
        'x_correction': list(x_error.support),
        'z_correction': list(z_error.support),
        'residual_weight': int((x_error.bits | z_error.bits).sum()),
        'indefinite_stabilizers': indefinite,
    }


_HADAMARD = {'0': '+', '+': '0', '1': '-', '-': '1'}


def expected_label(circuit, label):
    action = circuit.metadata.get('logical_action', 'identity')
    if action == 'prepare':
        return circuit.metadata['prepared_label']
    if action == 'hadamard':
        return ''.join(_HADAMARD[ch] for ch in label)
    return label


def logical_matches(state, label):
    """True when every logical qubit carries the eigenvalue named by its label."""
    for i, ch in enumerate(label):
        key = 'Z_L' if ch in '01' else 'X_L'
        want = 1 if ch in '0+' else -1
        if state[key][i] != want:
            return False
    return True


def judge(outcome, circuit, input_label):
    """Classify a run: rejected, corrected or logical_failure."""
    if not outcome.accepted:
        return {'status': 'rejected', 'residual_weight': 0}
    code = circuit.code_of(outcome.output_block)
    want = expected_label(circuit, _labels_for(code, input_label))
    state = output_logical_state(outcome, code)
    ok = state['indefinite_stabilizers'] == 0 and logical_matches(state, want)
    return {'status': 'corrected' if ok else 'logical_failure',
            'residual_weight': state['residual_weight']}
