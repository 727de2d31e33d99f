"""
Fault analysis for the switching protocols.

Exhaustive input-error enumeration (the p^w coefficients), correction
capability certification, single-fault sweeps, the verification sweep of the
prepared |+>_L block, Monte Carlo sampling of the independent X/Z channel and
resource counting from circuit instruction lists.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations, product

import numpy as np

from src.config import get_config
from src.errors import InvalidLabel, TooLarge, UndecodableSyndrome
from src.models.circuit import (
    ExternalPrep, Gate, ProtocolKind, TransversalGate, instruction_blocks,
)
from src.models.pauli import PauliOperator
from src.models.reports import EnumerationReport, ResourceReport, SamplingReport, SweepReport
from src.services import circuits, csscodes
from src.services.decoders import (  # noqa: F401  (public API)
    DecoderPolicy, LookupDecoder, build_decoder,
)
from src.services.stabsim import TWO_QUBIT

logger = logging.getLogger(__name__)

STATUSES = ('corrected', 'logical_failure', 'rejected')
INPUT_LABELS = ('0', '+')
PHASES = ('prep', 'switching', 'ec')

QUBIT_CONVENTION = 'total_qubits includes the input data block; ancilla_qubits excludes it'

# Competitor rows: (T -> Sym/Steane direction, reverse direction)
PUBLISHED_RESOURCES = [
    {'method': 'flag switching', 'source': 'published',
     'no_prep': {'qubits': [17, 18], 'two_qubit_gates': [174, 204]},
     'with_prep': {'qubits': [17, 18], 'two_qubit_gates': [174, 204]}},
    {'method': 'transversal flag', 'source': 'published',
     'no_prep': {'qubits': [24, 25], 'two_qubit_gates': [43, 139]},
     'with_prep': {'qubits': [25, 26], 'two_qubit_gates': [54, 197]}},
    {'method': 'transversal steane', 'source': 'published',
     'no_prep': {'qubits': [36, 52], 'two_qubit_gates': [21, 37]},
     'with_prep': {'qubits': [38, 57], 'two_qubit_gates': [54, 211]}},
]


def _policy(policy):
    if policy is None:
        return DecoderPolicy.minimum_weight()
    if isinstance(policy, str):
        return DecoderPolicy.named(policy)
    return policy


def _codes(qt, qsym):
    if qt is None:
        return csscodes.example_pair() if qsym is None else (csscodes.example_15(), qsym)
    return qt, qsym


def _limit(total):
    limit = get_config().PATTERN_LIMIT
    if total > limit:
        raise TooLarge(f'{total} patterns exceed the enumeration limit {limit}', total=total)


def pattern_operator(faults, size):
    """PauliOperator on a block from (qubit, letter) pairs; repeated qubits compose."""
    a = np.zeros(size, np.uint8)
    b = np.zeros(size, np.uint8)
    for q, letter in faults:
        if letter in 'XY':
            a[q] ^= 1
        if letter in 'ZY':
            b[q] ^= 1
    return PauliOperator(a, b)


def _injections(circuit, pattern):
    """Group (position, block, qubit, letter) faults into per-block injections."""
    grouped = {}
    for position, block, q, letter in pattern:
        grouped.setdefault((position, block), []).append((q, letter))
    sizes = {b.name: b.size for b in circuit.blocks}
    return [(position, pattern_operator(faults, sizes[block]), block)
            for (position, block), faults in sorted(grouped.items())]


def format_pattern(pattern, with_location=False):
    if with_location:
        return ' '.join(f'{pos}:{block}:{letter}{q + 1}' for pos, block, q, letter in pattern)
    return ' '.join(f'{letter}{q + 1}' for _, _, q, letter in pattern)


def _input_labels(circuit):
    if circuit.metadata.get('logical_action') == 'prepare':
        return ('0',)
    return INPUT_LABELS


def classify(runner, injections, seed=0):
    """(status, residual weight) of a pattern over the standard input labels."""
    circuit = runner.circuit
    status, residual = 'corrected', 0
    for label in _input_labels(circuit):
        try:
            outcome = runner.run(label, seed, injections)
        except UndecodableSyndrome:
            return 'logical_failure', None
        verdict = circuits.judge(outcome, circuit, label)
        if verdict['status'] == 'rejected':
            return 'rejected', 0
        if verdict['status'] == 'logical_failure':
            status = 'logical_failure'
        residual = max(residual, verdict['residual_weight'])
    return status, residual


def _run_chunk(circuit, policy, patterns, seed, detail):
    runner = circuits.ProtocolRunner(circuit, policy)
    counts = dict.fromkeys(STATUSES, 0)
    rows, worst = [], 0
    for pattern in patterns:
        status, residual = classify(runner, _injections(circuit, pattern), seed)
        counts[status] += 1
        if status == 'corrected':
            worst = max(worst, residual)
        if detail or status == 'logical_failure':
            rows.append((pattern, status, residual))
    return counts, rows, worst


def _dispatch(circuit, policy, patterns, seed, detail=False, workers=None):
    """Classify patterns, in parallel over disjoint chunks when WORKERS > 1."""
    workers = get_config().WORKERS if workers is None else workers
    if workers <= 1 or len(patterns) < 2 * workers:
        results = [_run_chunk(circuit, policy, patterns, seed, detail)]
    else:
        size = math.ceil(len(patterns) / workers)
        chunks = [patterns[i:i + size] for i in range(0, len(patterns), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, circuit, policy, chunk, seed, detail)
                       for chunk in chunks]
            results = [f.result() for f in futures]
    counts = dict.fromkeys(STATUSES, 0)
    rows, worst = [], 0
    for part_counts, part_rows, part_worst in results:
        for key, value in part_counts.items():
            counts[key] += value
        rows.extend(part_rows)
        worst = max(worst, part_worst)
    return counts, rows, worst


def _input_site(circuit):
    block = circuit.metadata.get('input_block') or circuit.output_block
    position = circuit.metadata.get('prepared_at', {}).get(block, 0)
    return block, position, circuit.block(block).size


def input_patterns(circuit, weight, paulis=('X', 'Z')):
    block, position, size = _input_site(circuit)
    _limit(math.comb(size, weight) * len(paulis) ** weight)
    return [tuple((position, block, q, letter) for q, letter in zip(support, letters))
            for support in combinations(range(size), weight)
            for letters in product(paulis, repeat=weight)]


def fault_locations(circuit):
    """(position, block, qubit) for every boundary and every qubit of a live block."""
    return [(position, block.name, q)
            for position in range(len(circuit.instructions) + 1)
            for block in circuits.live_blocks(circuit, position)
            for q in range(block.size)]


def circuit_patterns(circuit, weight, paulis=('X', 'Z')):
    faults = [loc + (letter,) for loc in fault_locations(circuit) for letter in paulis]
    _limit(math.comb(len(faults), weight))
    return [combo for combo in combinations(faults, weight)
            if len({f[:3] for f in combo}) == weight]


def _enumerate(circuit, weight, policy, mode, paulis, keep_patterns, seed, workers):
    if mode == 'input':
        patterns = input_patterns(circuit, weight, paulis)
    elif mode == 'circuit':
        patterns = circuit_patterns(circuit, weight, paulis)
    else:
        raise InvalidLabel(f'unknown enumeration mode {mode!r}')
    counts, rows, _ = _dispatch(circuit, policy, patterns, seed, workers=workers)
    failures = [format_pattern(p, mode == 'circuit') for p, status, _ in rows
                if status == 'logical_failure'] if keep_patterns else []
    report = EnumerationReport(
        protocol=circuit.metadata.get('kind', 'circuit'), weight=weight, policy=policy.name,
        mode=mode, counts=counts, total=len(patterns), coefficient=counts['logical_failure'],
        failure_patterns=sorted(failures), seed=seed)
    logger.info('%s weight %d (%s, %s): %s', report.protocol, weight, policy.name, mode, counts)
    return report


def enumerate_protocol_errors(kind, weight, policy='merged', qt=None, qsym=None, mode='input',
                              keep_patterns=False, paulis=('X', 'Z'), seed=None, workers=None,
                              with_prep=False):
    """Classify every weight-w error pattern; the coefficient of p^w is the failure count."""
    qt, qsym = _codes(qt, qsym)
    circuit = circuits.build_protocol(kind, qt, qsym, with_prep=with_prep)
    seed = get_config().DEFAULT_SEED if seed is None else seed
    return _enumerate(circuit, weight, _policy(policy), mode, tuple(paulis), keep_patterns,
                      seed, workers)


def certify_correction_capability(kind, pauli, policy='merged', qt=None, qsym=None,
                                  max_weight=None, seed=None, workers=None):
    """Largest t with every weight <= t error of one Pauli type fully corrected."""
    qt, qsym = _codes(qt, qsym)
    circuit = circuits.build_protocol(kind, qt, qsym)
    policy = _policy(policy)
    seed = get_config().DEFAULT_SEED if seed is None else seed
    _, _, size = _input_site(circuit)
    capability = 0
    for weight in range(1, (max_weight or size) + 1):
        report = _enumerate(circuit, weight, policy, 'input', (pauli,), False, seed, workers)
        if report.counts['corrected'] != report.total:
            break
        capability = weight
    logger.info('%s corrects %s errors up to weight %d under %s',
                circuit.metadata['kind'], pauli, capability, policy.name)
    return capability


def sweep_single_faults(kind, qt=None, qsym=None, policy='merged', paulis=('X', 'Y', 'Z'),
                        with_prep=False, seed=None, workers=None):
    """One Pauli at every boundary on every live qubit; failures and worst residual weight."""
    qt, qsym = _codes(qt, qsym)
    circuit = circuits.build_protocol(kind, qt, qsym, with_prep=with_prep)
    seed = get_config().DEFAULT_SEED if seed is None else seed
    patterns = [(loc + (letter,),) for loc in fault_locations(circuit) for letter in paulis]
    _limit(len(patterns))
    counts, rows, worst = _dispatch(circuit, _policy(policy), patterns, seed, workers=workers)
    return SweepReport(
        protocol=circuit.metadata['kind'], injections=len(patterns), outcomes=counts,
        failures=[format_pattern(p, True) for p, status, _ in rows if status == 'logical_failure'],
        max_residual_weight=worst)


def sweep_verification(qt=None, qsym=None, max_weight=4, policy='merged', seed=None,
                       workers=None):
    """X patterns on the verified |+>_L ancilla of the T -> Sym switching circuit.

    Reports how the rejections line up with the extra Z-generators and how
    accepted patterns fare after switching.
    """
    qt, qsym = _codes(qt, qsym)
    circuit = circuits.build_protocol(ProtocolKind.TELEPORT_T_TO_SYM_EC, qt, qsym, with_prep=True)
    extra = circuits.extra_verification_generators(qt, qsym).bits.astype(np.int64)
    position = circuit.metadata['prepared_at']['a1']
    size = circuit.block('a1').size
    patterns = []
    for weight in range(1, max_weight + 1):
        _limit(len(patterns) + math.comb(size, weight))
        patterns.extend(tuple((position, 'a1', q, 'X') for q in support)
                        for support in combinations(range(size), weight))
    seed = get_config().DEFAULT_SEED if seed is None else seed
    counts, rows, worst = _dispatch(circuit, _policy(policy), patterns, seed, detail=True,
                                    workers=workers)

    outcomes = dict(counts, rejection_mismatch=0, accepted_single_failures=0)
    failures = []
    for pattern, status, _ in rows:
        error = np.zeros(size, np.int64)
        error[[q for _, _, q, _ in pattern]] = 1
        flips = bool(((extra @ error) & 1).any())
        if flips != (status == 'rejected'):
            outcomes['rejection_mismatch'] += 1
        if status == 'logical_failure':
            failures.append(format_pattern(pattern))
            if len(pattern) == 1:
                outcomes['accepted_single_failures'] += 1
    return SweepReport(protocol='prep-plus-qt-verified', injections=len(patterns),
                       outcomes=outcomes, failures=sorted(failures, key=len),
                       max_residual_weight=worst)


def estimate_logical_error_rate(kind, p, shots, seed=None, qt=None, qsym=None, policy='merged',
                                batch=1 << 16):
    """Monte Carlo of (1-2p) rho + p X rho X + p Z rho Z on each input data qubit."""
    qt, qsym = _codes(qt, qsym)
    circuit = circuits.build_protocol(kind, qt, qsym)
    runner = circuits.ProtocolRunner(circuit, _policy(policy))
    block, position, size = _input_site(circuit)
    seed = get_config().DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    cache, failures, done = {}, 0, 0
    while done < shots:
        m = min(batch, shots - done)
        draws = rng.random((m, size))
        x = draws < p
        z = (draws >= p) & (draws < 2 * p)
        for row in np.flatnonzero((x | z).any(axis=1)):
            key = tuple((int(q), 'X') for q in np.flatnonzero(x[row])) + \
                tuple((int(q), 'Z') for q in np.flatnonzero(z[row]))
            if key not in cache:
                pattern = tuple((position, block, q, letter) for q, letter in key)
                cache[key] = classify(runner, _injections(circuit, pattern), seed)[0]
            failures += cache[key] == 'logical_failure'
        done += m
    rate = failures / shots
    return SamplingReport(
        protocol=circuit.metadata['kind'], p=p, shots=shots, failures=int(failures), rate=rate,
        standard_error=math.sqrt(rate * (1 - rate) / shots), distinct_patterns=len(cache))


def _gate_counts(circuit, ins):
    """(two-qubit, single-qubit) physical gates of one instruction."""
    if isinstance(ins, Gate):
        return (1, 0) if ins.name in TWO_QUBIT else (0, 1)
    if isinstance(ins, TransversalGate):
        size = circuit.block(ins.block_a).size
        return (0, size) if ins.name == 'H' else (size, 0)
    if isinstance(ins, ExternalPrep):
        return ins.two_qubit_gates, 0
    return 0, 0


def count_resources(circuit, include_prep=False):
    """Qubits and gates of a circuit, optionally without its preparation sub-circuits.

    Blocks touched only by preparation instructions are dropped together with
    them. Pauli feedback and recoveries are not counted as gates.
    """
    include_prep = include_prep or circuit.metadata.get('logical_action') == 'prepare'
    used, tally, synthesized = set(), {}, {}
    extra = 0
    for ins in circuit.instructions:
        if ins.phase == 'prep' and not include_prep:
            continue
        used.update(instruction_blocks(ins))
        source = 'published' if isinstance(ins, ExternalPrep) else 'computed'
        two, one = _gate_counts(circuit, ins)
        entry = tally.setdefault((ins.phase, source), [0, 0])
        entry[0] += two
        entry[1] += one
        if isinstance(ins, ExternalPrep):
            extra += ins.extra_qubits
            code = circuit.code_of(ins.block)
            sub = circuits.synthesize_encoding_circuit(code, ins.label).metadata
            synthesized[f'{ins.block}:{ins.label}'] = {
                'published_two_qubit_gates': ins.two_qubit_gates,
                'synthesized_two_qubit_gates': sub['two_qubit_gates'],
                'synthesized_single_qubit_gates': sub['single_qubit_gates'],
            }
    blocks = [b for b in circuit.blocks if b.name in used or b.role in ('input', 'output')]
    data = sum(b.size for b in blocks if b.role == 'input')
    total = sum(b.size for b in blocks) + extra

    order = {phase: i for i, phase in enumerate(PHASES)}
    breakdown = [
        {'phase': phase, 'source': source, 'two_qubit_gates': two, 'single_qubit_gates': one}
        for (phase, source), (two, one) in sorted(
            tally.items(), key=lambda item: (order.get(item[0][0], len(PHASES)), item[0][1]))
    ]
    return ResourceReport(
        protocol=circuit.metadata.get('kind', 'circuit'),
        ancilla_qubits=total - data, data_qubits=data, total_qubits=total,
        two_qubit_gates=sum(e['two_qubit_gates'] for e in breakdown),
        single_qubit_gates=sum(e['single_qubit_gates'] for e in breakdown),
        breakdown=breakdown,
        includes_state_prep=include_prep and any(ins.phase == 'prep'
                                                 for ins in circuit.instructions),
        convention=QUBIT_CONVENTION, synthesized_prep=synthesized)


def resource_table(qt=None, qsym=None):
    """Both switching directions with and without preparation, beside the published rows."""
    qt, qsym = _codes(qt, qsym)
    row = {'method': 'transversal switching', 'source': 'computed'}
    for key, with_prep in (('no_prep', False), ('with_prep', True)):
        reports = [count_resources(circuits.build_protocol(kind, qt, qsym, with_prep=with_prep),
                                   include_prep=with_prep)
                   for kind in (ProtocolKind.TELEPORT_T_TO_SYM_EC,
                                ProtocolKind.TELEPORT_SYM_TO_T_EC)]
        row[key] = {'qubits': [r.total_qubits for r in reports],
                    'two_qubit_gates': [r.two_qubit_gates for r in reports]}
    return [row] + PUBLISHED_RESOURCES
