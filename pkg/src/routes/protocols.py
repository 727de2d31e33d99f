import re

import click

from src.config import get_config
from src.errors import ParseError
from src.models.circuit import ProtocolKind, parse_circuit
from src.models.pauli import PauliOperator
from src.routes import (
    emit, handle_errors, load_pair, load_request, pretty_option, qsym_option, qt_option,
    read_text,
)
from src.services import circuits, faultlab

protocols_cli = click.Group('protocols')

PROTOCOLS = [kind.value for kind in ProtocolKind]
_INJECTION = re.compile(r'^(\d+):([A-Za-z_][A-Za-z0-9_]*):([+-]?i?[IXYZ_]+)$')


def protocol_option(required=True):
    return click.option('--protocol', 'protocol', required=required,
                        type=click.Choice(PROTOCOLS), help='Protocol kind.')


def parse_injection(spec):
    """pos:block:PAULISTRING -> (position, PauliOperator, block)"""
    match = _INJECTION.match(spec.strip())
    if not match:
        raise ParseError(f'injection {spec!r} is not pos:block:PAULISTRING')
    return int(match.group(1)), PauliOperator.from_string(match.group(3)), match.group(2)


def parse_forced(spec):
    label, sep, bit = spec.partition('=')
    if not sep or bit not in ('0', '1'):
        raise ParseError(f'forced outcome {spec!r} is not label=0 or label=1')
    return label, int(bit)


def _circuit(protocol, circuit_path, qt_path, qsym_path, with_prep, encoder):
    qt, qsym = load_pair(qt_path, qsym_path)
    if circuit_path:
        return parse_circuit(read_text(circuit_path), {'qt': qt.base, 'qsym': qsym})
    if protocol is None:
        raise ParseError('either --protocol or --circuit is required')
    return circuits.build_protocol(protocol, qt, qsym, with_prep=with_prep, encoder=encoder)


@protocols_cli.command('simulate')
@protocol_option(required=False)
@click.option('--input', 'input_label', default='0', show_default=True,
              type=click.Choice(['0', '1', '+', '-']), help='Logical input state.')
@click.option('--seed', type=int, help='Seed for measurement outcomes.')
@click.option('--inject', multiple=True, help='Error injection pos:block:PAULISTRING.')
@click.option('--force', multiple=True, help='Forced measurement outcome label=bit.')
@click.option('--circuit', 'circuit_path', type=click.Path(exists=True, dir_okay=False),
              help='Circuit text file replacing the built protocol.')
@click.option('--with-prep', is_flag=True, help='Inline the ancilla preparation circuits.')
@qt_option
@qsym_option
@pretty_option
@handle_errors('simulate')
def simulate(protocol, input_label, seed, inject, force, circuit_path, with_prep, qt_path,
             qsym_path, pretty):
    """Run a protocol once and report the logical output state."""
    request = load_request('simulate', paths={'circuit': circuit_path, 'qt': qt_path,
                                              'qsym': qsym_path},
                           seed=seed, with_prep=with_prep)
    circuit = _circuit(protocol, circuit_path, qt_path, qsym_path, with_prep, 'published')
    injections = [parse_injection(spec) for spec in inject]
    forced = dict(parse_forced(spec) for spec in force)
    seed = get_config().DEFAULT_SEED if request.seed is None else request.seed
    outcome = circuits.run(circuit, seed, injections, forced, input_label)
    payload = outcome.to_dict()
    payload['input'] = input_label
    payload['seed'] = seed
    payload['record'] = outcome.record.to_dict()
    status = 'ok' if outcome.accepted else 'false'
    if outcome.accepted:
        code = circuit.code_of(outcome.output_block)
        state = circuits.output_logical_state(outcome, code)
        expected = circuits.expected_label(circuit, input_label)
        payload['output_state'] = state
        payload['expected'] = ''.join(expected)
        payload['matches'] = circuits.logical_matches(state, expected)
        status = 'ok' if payload['matches'] else 'false'
    return emit('simulate', payload, {'computed': sorted(payload)}, status, pretty)


@protocols_cli.command('show-circuit')
@protocol_option()
@click.option('--with-prep', is_flag=True, help='Inline the ancilla preparation circuits.')
@click.option('--encoder', default='published', show_default=True,
              type=click.Choice(list(circuits.ENCODERS)),
              help='Published preparations or synthesized encoders.')
@qt_option
@qsym_option
@pretty_option
@handle_errors('show-circuit')
def show_circuit(protocol, with_prep, encoder, qt_path, qsym_path, pretty):
    """Print the text serialization of a protocol circuit."""
    load_request('show-circuit', paths={'qt': qt_path, 'qsym': qsym_path},
                 with_prep=with_prep, encoder=encoder)
    circuit = _circuit(protocol, None, qt_path, qsym_path, with_prep, encoder)
    payload = {
        'protocol': protocol,
        'text': circuit.to_text(),
        'blocks': [b.name for b in circuit.blocks],
        'instructions': len(circuit.instructions),
        'qubits': circuit.num_qubits,
    }
    return emit('show-circuit', payload, {'computed': sorted(payload)}, pretty=pretty)


@protocols_cli.command('resources')
@protocol_option()
@click.option('--with-prep', is_flag=True, help='Count the ancilla preparation circuits.')
@qt_option
@qsym_option
@pretty_option
@handle_errors('resources')
def resources(protocol, with_prep, qt_path, qsym_path, pretty):
    """Qubit and two-qubit gate counts, beside the published comparison rows."""
    load_request('resources', paths={'qt': qt_path, 'qsym': qsym_path}, with_prep=with_prep)
    qt, qsym = load_pair(qt_path, qsym_path)
    circuit = circuits.build_protocol(protocol, qt, qsym, with_prep=with_prep)
    report = faultlab.count_resources(circuit, include_prep=with_prep)
    payload = report.to_dict()
    payload['published'] = faultlab.PUBLISHED_RESOURCES
    provenance = {'computed': ['ancilla_qubits', 'data_qubits', 'total_qubits',
                               'two_qubit_gates', 'single_qubit_gates', 'breakdown'],
                  'published': ['published'] + sorted(report.synthesized_prep)}
    return emit('resources', payload, provenance, pretty=pretty)
