import click

from src.routes import (
    emit, handle_errors, load_pair, load_request, pretty_option, qsym_option, qt_option,
)
from src.routes.protocols import protocol_option
from src.services import faultlab

faults_cli = click.Group('faults')

policy_option = click.option('--policy', default='merged', show_default=True,
                             type=click.Choice(['merged', 'baseline']),
                             help='Decoder model: full lookup tables or weight-1 capacity.')
workers_option = click.option('--workers', type=int,
                              help='Parallel workers (defaults to TRIORTHO_WORKERS).')


@faults_cli.command('enumerate-errors')
@protocol_option()
@click.option('--weight', required=True, type=int, help='Error weight w.')
@policy_option
@click.option('--mode', default='input', show_default=True,
              type=click.Choice(['input', 'circuit']),
              help='Input data errors or faults at every circuit location.')
@click.option('--keep-patterns', is_flag=True, help='List the failing patterns.')
@click.option('--seed', type=int, help='Seed for measurement outcomes.')
@workers_option
@qt_option
@qsym_option
@pretty_option
@handle_errors('enumerate-errors')
def enumerate_errors(protocol, weight, policy, mode, keep_patterns, seed, workers, qt_path,
                     qsym_path, pretty):
    """Count logical failures over every weight-w error pattern."""
    request = load_request('enumerate-errors', paths={'qt': qt_path, 'qsym': qsym_path},
                           weight=weight, seed=seed, policy=policy, mode=mode)
    qt, qsym = load_pair(qt_path, qsym_path)
    report = faultlab.enumerate_protocol_errors(
        protocol, request.weight, policy, qt, qsym, mode=mode, keep_patterns=keep_patterns,
        seed=request.seed, workers=workers)
    return emit('enumerate-errors', report.to_dict(),
                {'computed': ['counts', 'total', 'coefficient']}, pretty=pretty)


@faults_cli.command('certify')
@protocol_option()
@click.option('--pauli', required=True, type=click.Choice(['X', 'Z']), help='Error type.')
@policy_option
@workers_option
@qt_option
@qsym_option
@pretty_option
@handle_errors('certify')
def certify(protocol, pauli, policy, workers, qt_path, qsym_path, pretty):
    """Largest weight of input errors of one type that the protocol corrects."""
    load_request('certify', paths={'qt': qt_path, 'qsym': qsym_path}, pauli=pauli,
                 policy=policy)
    qt, qsym = load_pair(qt_path, qsym_path)
    capability = faultlab.certify_correction_capability(protocol, pauli, policy, qt, qsym,
                                                        workers=workers)
    payload = {'protocol': protocol, 'pauli': pauli, 'policy': policy, 'capability': capability}
    return emit('certify', payload, {'computed': ['capability']}, pretty=pretty)


@faults_cli.command('sweep')
@protocol_option()
@policy_option
@click.option('--with-prep', is_flag=True, help='Include the preparation circuits.')
@workers_option
@qt_option
@qsym_option
@pretty_option
@handle_errors('sweep')
def sweep(protocol, policy, with_prep, workers, qt_path, qsym_path, pretty):
    """Inject X, Y and Z at every location; fails on any logical failure."""
    load_request('sweep', paths={'qt': qt_path, 'qsym': qsym_path}, policy=policy,
                 with_prep=with_prep)
    qt, qsym = load_pair(qt_path, qsym_path)
    report = faultlab.sweep_single_faults(protocol, qt, qsym, policy, with_prep=with_prep,
                                          workers=workers)
    status = 'false' if report.outcomes['logical_failure'] else 'ok'
    return emit('sweep', report.to_dict(), {'computed': ['outcomes', 'max_residual_weight']},
                status, pretty)


@faults_cli.command('sweep-verification')
@click.option('--max-weight', default=4, show_default=True, type=int,
              help='Largest X-error weight injected on the prepared block.')
@workers_option
@qt_option
@qsym_option
@pretty_option
@handle_errors('sweep-verification')
def sweep_verification(max_weight, workers, qt_path, qsym_path, pretty):
    """X errors on the verified |+>_L ancilla of the T -> Sym switching circuit."""
    request = load_request('sweep-verification', paths={'qt': qt_path, 'qsym': qsym_path},
                           weight=max_weight)
    qt, qsym = load_pair(qt_path, qsym_path)
    report = faultlab.sweep_verification(qt, qsym, request.weight, workers=workers)
    status = 'false' if report.outcomes['rejection_mismatch'] else 'ok'
    return emit('sweep-verification', report.to_dict(), {'computed': ['outcomes']},
                status, pretty)


@faults_cli.command('sample')
@protocol_option()
@click.option('--p', 'p', required=True, type=click.FloatRange(0.0, 0.5),
              help='Probability of X and of Z on each input qubit.')
@click.option('--shots', default=100000, show_default=True, type=int, help='Samples.')
@click.option('--seed', type=int, help='Sampling seed.')
@policy_option
@qt_option
@qsym_option
@pretty_option
@handle_errors('sample')
def sample(protocol, p, shots, seed, policy, qt_path, qsym_path, pretty):
    """Monte Carlo logical error rate under the independent X/Z input channel."""
    request = load_request('sample', paths={'qt': qt_path, 'qsym': qsym_path}, limit=shots,
                           seed=seed, policy=policy)
    qt, qsym = load_pair(qt_path, qsym_path)
    report = faultlab.estimate_logical_error_rate(protocol, p, request.limit, request.seed,
                                                  qt, qsym, policy)
    return emit('sample', report.to_dict(), {'computed': ['rate', 'standard_error']},
                pretty=pretty)
