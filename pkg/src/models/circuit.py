"""
Protocol circuits over named qubit blocks.

Qubit indices inside a block are 0-based in the text format (``CZ a[3] b[3]``).
One instruction per line; ``BLOCK`` lines declare the blocks first.
"""
import enum
import re
from dataclasses import dataclass, field

from src.errors import MalformedCondition, ParseError, UnsupportedKind


class ProtocolKind(enum.Enum):
    STEANE_EC = 'steane-ec'
    HADAMARD_CZ = 'hadamard-cz'
    TELEPORT_T_TO_SYM = 'teleport-t-to-sym'
    TELEPORT_SYM_TO_T = 'teleport-sym-to-t'
    HADAMARD_STEANE_MERGED = 'hadamard-cz-merged'
    TELEPORT_T_TO_SYM_EC = 'teleport-t-to-sym-ec'
    TELEPORT_SYM_TO_T_EC = 'teleport-sym-to-t-ec'
    PREP_PLUS_QT_VERIFIED = 'prep-plus-qt-verified'
    PREP_ZERO_SYM = 'prep-zero-sym'
    PREP_PLUS_SYM = 'prep-plus-sym'

    @property
    def title(self):
        return _TITLES[self]

    @classmethod
    def parse(cls, text):
        for kind in cls:
            if text in (kind.value, kind.title, kind.name):
                return kind
        raise UnsupportedKind(f'unknown protocol {text!r}')


GATE_ARITY = {'H': 1, 'S': 1, 'SDG': 1, 'X': 1, 'Y': 1, 'Z': 1, 'CNOT': 2, 'CX': 2, 'CZ': 2}
TRANSVERSAL_ARITY = {'H': 1, 'CNOT': 2, 'CZ': 2}

_TITLES = {
    ProtocolKind.STEANE_EC: 'SteaneEC',
    ProtocolKind.HADAMARD_CZ: 'HadamardCZ',
    ProtocolKind.TELEPORT_T_TO_SYM: 'TeleportTtoSym',
    ProtocolKind.TELEPORT_SYM_TO_T: 'TeleportSymToT',
    ProtocolKind.HADAMARD_STEANE_MERGED: 'HadamardSteaneMerged',
    ProtocolKind.TELEPORT_T_TO_SYM_EC: 'TeleportTtoSymEC',
    ProtocolKind.TELEPORT_SYM_TO_T_EC: 'TeleportSymToTEC',
    ProtocolKind.PREP_PLUS_QT_VERIFIED: 'PrepPlusQTVerified',
    ProtocolKind.PREP_ZERO_SYM: 'PrepZeroSym',
    ProtocolKind.PREP_PLUS_SYM: 'PrepPlusSym',
}


# Classical conditions

_TOKEN = re.compile(r'\s*(?:([A-Za-z_][A-Za-z0-9_]*)(?:\[(\d+)\])?|([\^|&()]))')
_PRECEDENCE = {'|': 1, '^': 2, '&': 3}


class Condition:
    """Parity/boolean expression over measurement labels: ^ (xor), | (or), & (and)."""

    def __init__(self, text):
        self.text = text.strip()
        self._tokens = self._tokenize(self.text)
        self._pos = 0
        self.tree = self._expression(0)
        if self._pos != len(self._tokens):
            raise MalformedCondition(f'unexpected {self._tokens[self._pos][1]!r} in {text!r}')

    @staticmethod
    def _tokenize(text):
        tokens, pos = [], 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            match = _TOKEN.match(text, pos)
            if not match or match.end() == pos:
                raise MalformedCondition(f'cannot parse {text[pos:]!r}')
            if match.group(1):
                index = int(match.group(2)) if match.group(2) is not None else None
                tokens.append(('label', (match.group(1), index)))
            else:
                tokens.append(('op', match.group(3)))
            pos = match.end()
        if not tokens:
            raise MalformedCondition('empty condition')
        return tokens

    def _atom(self):
        if self._pos >= len(self._tokens):
            raise MalformedCondition(f'condition {self.text!r} ends early')
        kind, value = self._tokens[self._pos]
        self._pos += 1
        if kind == 'label':
            return ('label',) + value
        if value == '(':
            inner = self._expression(0)
            if self._pos >= len(self._tokens) or self._tokens[self._pos] != ('op', ')'):
                raise MalformedCondition(f'unbalanced parenthesis in {self.text!r}')
            self._pos += 1
            return inner
        raise MalformedCondition(f'unexpected {value!r} in {self.text!r}')

    def _expression(self, floor):
        left = self._atom()
        while self._pos < len(self._tokens):
            kind, op = self._tokens[self._pos]
            if kind != 'op' or op not in _PRECEDENCE or _PRECEDENCE[op] <= floor:
                break
            self._pos += 1
            right = self._expression(_PRECEDENCE[op])
            left = ('op', op, left, right)
        return left

    def labels(self):
        found = []

        def walk(node):
            if node[0] == 'label':
                found.append(node[1])
            else:
                walk(node[2])
                walk(node[3])

        walk(self.tree)
        return found

    def evaluate(self, lookup):
        """lookup(name, index) -> bit"""

        def walk(node):
            if node[0] == 'label':
                return int(lookup(node[1], node[2])) & 1
            left, right = walk(node[2]), walk(node[3])
            if node[1] == '^':
                return left ^ right
            if node[1] == '|':
                return left | right
            return left & right

        return walk(self.tree)

    def __eq__(self, other):
        return isinstance(other, Condition) and self.tree == other.tree

    def __hash__(self):
        return hash(self.tree)

    def __repr__(self):
        return f'Condition({self.text!r})'


# Blocks and instructions

@dataclass(frozen=True)
class Block:
    name: str
    size: int
    code: str = None
    label: str = None
    role: str = 'ancilla'

    def to_text(self):
        parts = [f'BLOCK {self.name}']
        if self.code:
            parts.append(f'code={self.code}')
        else:
            parts.append(f'qubits={self.size}')
        if self.label is not None:
            parts.append(f'label={self.label}')
        parts.append(f'role={self.role}')
        return ' '.join(parts)


def _suffix(phase):
    return '' if phase == 'switching' else f' @{phase}'


@dataclass(frozen=True)
class Gate:
    name: str
    targets: tuple
    phase: str = 'switching'

    def to_text(self):
        qubits = ' '.join(f'{b}[{i}]' for b, i in self.targets)
        return f'{self.name} {qubits}{_suffix(self.phase)}'


@dataclass(frozen=True)
class TransversalGate:
    name: str
    block_a: str
    block_b: str = None
    phase: str = 'switching'

    def to_text(self):
        blocks = self.block_a if self.block_b is None else f'{self.block_a} {self.block_b}'
        return f'T{self.name} {blocks}{_suffix(self.phase)}'


@dataclass(frozen=True)
class MeasureBlock:
    block: str
    basis: str
    label: str
    role: str = 'readout'
    phase: str = 'switching'

    def to_text(self):
        role = '' if self.role == 'readout' else f' {self.role}'
        return f'MEAS{self.basis} {self.block} -> {self.label}{role}{_suffix(self.phase)}'


@dataclass(frozen=True)
class MeasureQubit:
    block: str
    index: int
    basis: str
    label: str
    phase: str = 'switching'

    def to_text(self):
        return f'MEAS{self.basis} {self.block}[{self.index}] -> {self.label}{_suffix(self.phase)}'


@dataclass(frozen=True)
class ConditionalPauli:
    condition: Condition
    pauli: str
    block: str
    logical_index: int = 0
    phase: str = 'switching'

    def to_text(self):
        index = f'[{self.logical_index}]' if self.logical_index else ''
        return f'CPAULI ({self.condition.text}) {self.pauli}{index} {self.block}{_suffix(self.phase)}'


@dataclass(frozen=True)
class Recover:
    """Apply the decoded correction of a syndrome measurement, as the given Pauli type."""
    block: str
    source: str
    pauli: str
    phase: str = 'switching'

    def to_text(self):
        return f'RECOVER {self.pauli} {self.block} <- {self.source}{_suffix(self.phase)}'


@dataclass(frozen=True)
class VerifyDiscard:
    condition: Condition
    phase: str = 'switching'

    def to_text(self):
        return f'VERIFY ({self.condition.text}) DISCARD{_suffix(self.phase)}'


@dataclass(frozen=True)
class ResetBlock:
    block: str
    label: str
    phase: str = 'switching'

    def to_text(self):
        return f'RESET {self.block} {self.label}{_suffix(self.phase)}'


@dataclass(frozen=True)
class ExternalPrep:
    """Preparation taken from the literature: simulated as ideal encoding, costed as published."""
    block: str
    label: str
    two_qubit_gates: int
    extra_qubits: int = 0
    source: str = 'published'
    phase: str = 'prep'

    def to_text(self):
        return (f'PREP {self.block} {self.label} cost={self.two_qubit_gates} '
                f'extra={self.extra_qubits} source={self.source}{_suffix(self.phase)}')


MEASUREMENTS = (MeasureBlock, MeasureQubit)


@dataclass
class Circuit:
    blocks: list
    instructions: list
    codes: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def block(self, name):
        for b in self.blocks:
            if b.name == name:
                return b
        raise ParseError(f'unknown block {name!r}')

    def code_of(self, name):
        block = self.block(name)
        if block.code is None:
            raise ParseError(f'block {name!r} carries no code')
        return self.codes[block.code]

    def offsets(self):
        """Block name -> (first global qubit, size), in declaration order."""
        out, start = {}, 0
        for b in self.blocks:
            out[b.name] = (start, b.size)
            start += b.size
        return out

    @property
    def num_qubits(self):
        return sum(b.size for b in self.blocks)

    @property
    def output_block(self):
        if 'output_block' in self.metadata:
            return self.metadata['output_block']
        outputs = [b.name for b in self.blocks if b.role == 'output']
        if outputs:
            return outputs[0]
        inputs = [b.name for b in self.blocks if b.role == 'input']
        return inputs[0] if inputs else None

    def validate(self):
        names = {b.name for b in self.blocks}
        if len(names) != len(self.blocks):
            raise ParseError('duplicate block names')
        for b in self.blocks:
            if b.code is not None and b.code not in self.codes:
                raise ParseError(f'block {b.name!r} refers to unknown code {b.code!r}')
        defined = {}
        for position, ins in enumerate(self.instructions):
            for name in instruction_blocks(ins):
                if name not in names:
                    raise ParseError(f'instruction {position} uses unknown block {name!r}')
            if isinstance(ins, Gate):
                arity = GATE_ARITY.get(ins.name)
                if arity is None:
                    raise ParseError(f'instruction {position}: unknown gate {ins.name!r}')
                if len(ins.targets) != arity:
                    raise ParseError(
                        f'instruction {position}: {ins.name} takes {arity} qubit(s)')
                for b, i in ins.targets:
                    if not 0 <= i < self.block(b).size:
                        raise ParseError(f'instruction {position}: {b}[{i}] out of range')
            if isinstance(ins, TransversalGate):
                arity = TRANSVERSAL_ARITY.get(ins.name)
                if arity is None:
                    raise ParseError(
                        f'instruction {position}: unknown transversal gate {ins.name!r}')
                if (ins.block_b is not None) != (arity == 2):
                    raise ParseError(f'instruction {position}: T{ins.name} takes {arity} block(s)')
                if arity == 2 and self.block(ins.block_a).size != self.block(ins.block_b).size:
                    raise ParseError(
                        f'instruction {position}: T{ins.name} on blocks of different size')
            if isinstance(ins, (ConditionalPauli, VerifyDiscard)):
                for label, _ in ins.condition.labels():
                    if label not in defined:
                        raise MalformedCondition(
                            f'instruction {position} reads {label!r} before it is measured')
            if isinstance(ins, Recover):
                if defined.get(ins.source) != 'syndrome':
                    raise MalformedCondition(
                        f'instruction {position} recovers from {ins.source!r}, '
                        'which is not an earlier syndrome measurement')
            if isinstance(ins, MEASUREMENTS):
                defined[ins.label] = getattr(ins, 'role', 'qubit')
        return self

    def to_text(self):
        lines = [b.to_text() for b in self.blocks]
        lines.extend(ins.to_text() for ins in self.instructions)
        return '\n'.join(lines) + '\n'


def instruction_blocks(ins):
    if isinstance(ins, Gate):
        return [b for b, _ in ins.targets]
    if isinstance(ins, TransversalGate):
        return [ins.block_a] + ([ins.block_b] if ins.block_b else [])
    if isinstance(ins, VerifyDiscard):
        return []
    return [ins.block]


@dataclass
class ProtocolOutcome:
    accepted: bool
    tableau: object
    record: object
    feedback: list
    output_block: str
    block_slices: dict
    readouts: dict = field(default_factory=dict)
    discarded_at: int = None

    def to_dict(self):
        return {
            'accepted': self.accepted,
            'output_block': self.output_block,
            'feedback': self.feedback,
            'readouts': self.readouts,
            'discarded_at': self.discarded_at,
            'measurements': len(self.record),
        }


# Text parsing

_QUBIT = re.compile(r'^([A-Za-z_][A-Za-z0-9_]*)\[(\d+)\]$')
_CONDITIONED = re.compile(r'^\((.*)\)\s+(.*)$')
_LOGICAL = re.compile(r'^([XZ]_L)(?:\[(\d+)\])?$')


def _qubit(token, lineno):
    match = _QUBIT.match(token)
    if not match:
        raise ParseError(f'line {lineno}: expected block[index], got {token!r}', line=lineno)
    return match.group(1), int(match.group(2))


def _parse_block(words, lineno, codes):
    name, opts = words[1], {}
    for word in words[2:]:
        if '=' not in word:
            raise ParseError(f'line {lineno}: expected key=value, got {word!r}', line=lineno)
        key, value = word.split('=', 1)
        opts[key] = value
    if 'code' in opts:
        if opts['code'] not in codes:
            raise ParseError(f'line {lineno}: unknown code {opts["code"]!r}', line=lineno)
        size = codes[opts['code']].n
    elif 'qubits' in opts:
        size = int(opts['qubits'])
    else:
        raise ParseError(f'line {lineno}: block needs code= or qubits=', line=lineno)
    return Block(name, size, opts.get('code'), opts.get('label'), opts.get('role', 'ancilla'))


def _parse_instruction(line, lineno):
    phase = 'switching'
    if ' @' in line:
        line, phase = line.rsplit(' @', 1)
        phase = phase.strip()
    words = line.split()
    op = words[0].upper()
    try:
        if op.startswith('MEAS'):
            basis = op[4:]
            if basis not in ('X', 'Z') or words[2] != '->':
                raise ParseError(f'line {lineno}: malformed measurement', line=lineno)
            target, label = words[1], words[3]
            if '[' in target:
                block, index = _qubit(target, lineno)
                return MeasureQubit(block, index, basis, label, phase=phase)
            role = words[4] if len(words) > 4 else 'readout'
            return MeasureBlock(target, basis, label, role, phase=phase)
        if op == 'CPAULI':
            match = _CONDITIONED.match(line[len(words[0]):].strip())
            if not match:
                raise ParseError(f'line {lineno}: malformed CPAULI', line=lineno)
            rest = match.group(2).split()
            logical = _LOGICAL.match(rest[0])
            if not logical:
                raise ParseError(f'line {lineno}: expected X_L or Z_L', line=lineno)
            return ConditionalPauli(Condition(match.group(1)), logical.group(1), rest[1],
                                    int(logical.group(2) or 0), phase=phase)
        if op == 'VERIFY':
            match = _CONDITIONED.match(line[len(words[0]):].strip())
            if not match or match.group(2).strip().upper() != 'DISCARD':
                raise ParseError(f'line {lineno}: malformed VERIFY', line=lineno)
            return VerifyDiscard(Condition(match.group(1)), phase=phase)
        if op == 'RECOVER':
            if words[3] != '<-':
                raise ParseError(f'line {lineno}: malformed RECOVER', line=lineno)
            return Recover(words[2], words[4], words[1], phase=phase)
        if op == 'RESET':
            return ResetBlock(words[1], words[2], phase=phase)
        if op == 'PREP':
            opts = dict(w.split('=', 1) for w in words[3:])
            return ExternalPrep(words[1], words[2], int(opts.get('cost', 0)),
                                int(opts.get('extra', 0)), opts.get('source', 'published'),
                                phase=phase)
        if op.startswith('T') and op[1:] in ('CNOT', 'CZ', 'H'):
            return TransversalGate(op[1:], words[1], words[2] if len(words) > 2 else None,
                                   phase=phase)
        targets = tuple(_qubit(w, lineno) for w in words[1:])
        return Gate(op, targets, phase=phase)
    except (IndexError, ValueError):
        raise ParseError(f'line {lineno}: malformed instruction {line!r}', line=lineno)


def parse_circuit(text, codes):
    """Inverse of Circuit.to_text; codes maps the code names used in BLOCK lines."""
    blocks, instructions = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        words = line.split()
        if words[0].upper() == 'BLOCK':
            blocks.append(_parse_block(words, lineno, codes))
        else:
            instructions.append(_parse_instruction(line, lineno))
    used = {b.code for b in blocks if b.code}
    circuit = Circuit(blocks, instructions, {name: codes[name] for name in used},
                      {'source': 'text'})
    return circuit.validate()
