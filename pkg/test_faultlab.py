import math

import pytest

from src.config import TestingConfig
from src.errors import InvalidLabel, TooLarge
from src.services import circuits, faultlab

EC_KINDS = ['teleport-t-to-sym-ec', 'teleport-sym-to-t-ec', 'hadamard-cz-merged']


def test_merged_decoder_halves_the_quadratic_coefficient(qt, qsym):
    merged = faultlab.enumerate_protocol_errors('hadamard-cz-merged', 2, 'merged', qt, qsym)
    assert merged.total == 420
    assert merged.coefficient == 105
    assert sum(merged.counts.values()) == merged.total
    baseline = faultlab.enumerate_protocol_errors('hadamard-cz-merged', 2, 'baseline', qt, qsym)
    assert baseline.coefficient == 210


def test_single_errors_never_fail(qt, qsym):
    for policy in ('merged', 'baseline'):
        report = faultlab.enumerate_protocol_errors('hadamard-cz-merged', 1, policy, qt, qsym)
        assert report.coefficient == 0
        assert report.total == 30


def test_failure_patterns_are_kept_on_request(qt, qsym):
    report = faultlab.enumerate_protocol_errors('hadamard-cz-merged', 2, 'merged', qt, qsym,
                                                keep_patterns=True)
    assert len(report.failure_patterns) == 105
    assert report.failure_patterns == sorted(report.failure_patterns)


@pytest.mark.parametrize('policy,expected', [('merged', (3, 1)), ('baseline', (1, 1))])
def test_correction_capability(qt, qsym, policy, expected):
    x = faultlab.certify_correction_capability('hadamard-cz-merged', 'X', policy, qt, qsym,
                                               max_weight=4)
    z = faultlab.certify_correction_capability('hadamard-cz-merged', 'Z', policy, qt, qsym,
                                               max_weight=4)
    assert (x, z) == expected


def test_circuit_mode_places_faults_at_every_location(qt, qsym):
    circuit = circuits.build_protocol('hadamard-cz-merged', qt, qsym)
    report = faultlab.enumerate_protocol_errors('hadamard-cz-merged', 1, 'merged', qt, qsym,
                                                mode='circuit')
    assert report.total == 2 * len(faultlab.fault_locations(circuit))
    assert report.coefficient == 0


def test_enumeration_rejects_bad_mode_and_huge_requests(qt, qsym, monkeypatch):
    with pytest.raises(InvalidLabel):
        faultlab.enumerate_protocol_errors('hadamard-cz', 1, qt=qt, qsym=qsym, mode='sideways')
    monkeypatch.setattr(TestingConfig, 'PATTERN_LIMIT', 10)
    with pytest.raises(TooLarge):
        faultlab.enumerate_protocol_errors('hadamard-cz', 1, qt=qt, qsym=qsym)


@pytest.mark.parametrize('kind', EC_KINDS)
def test_single_fault_sweep(qt, qsym, kind):
    report = faultlab.sweep_single_faults(kind, qt, qsym)
    assert report.outcomes['logical_failure'] == 0
    assert not report.failures
    assert report.max_residual_weight <= 1
    assert report.injections == sum(report.outcomes.values())


def test_verification_rejects_exactly_the_flipped_generators(qt, qsym):
    report = faultlab.sweep_verification(qt, qsym, max_weight=2)
    assert report.injections == 15 + 105
    assert report.outcomes['rejection_mismatch'] == 0
    assert report.outcomes['accepted_single_failures'] == 0
    assert report.outcomes['rejected'] > 0


def test_sampling(qt, qsym):
    clean = faultlab.estimate_logical_error_rate('hadamard-cz-merged', 0.0, 500, seed=1,
                                                 qt=qt, qsym=qsym)
    assert (clean.failures, clean.rate, clean.distinct_patterns) == (0, 0.0, 0)
    a = faultlab.estimate_logical_error_rate('hadamard-cz-merged', 0.01, 2000, seed=9,
                                             qt=qt, qsym=qsym, batch=256)
    b = faultlab.estimate_logical_error_rate('hadamard-cz-merged', 0.01, 2000, seed=9,
                                             qt=qt, qsym=qsym, batch=256)
    assert a == b
    assert 0 < a.distinct_patterns
    assert 0 <= a.rate < 0.1


@pytest.mark.parametrize('kind', ['teleport-t-to-sym-ec', 'teleport-sym-to-t-ec'])
def test_switching_resources(qt, qsym, kind):
    bare = faultlab.count_resources(circuits.build_protocol(kind, qt, qsym))
    assert (bare.total_qubits, bare.two_qubit_gates) == (45, 30)
    assert bare.data_qubits == 15 and not bare.includes_state_prep
    full = faultlab.count_resources(circuits.build_protocol(kind, qt, qsym, with_prep=True),
                                    include_prep=True)
    assert (full.total_qubits, full.two_qubit_gates) == (48, 96)
    assert full.includes_state_prep
    assert full.synthesized_prep
    published = [e for e in full.breakdown if e['source'] == 'published']
    assert sum(e['two_qubit_gates'] for e in published) == 51


@pytest.mark.parametrize('kind,ancilla,total,gates', [
    ('hadamard-cz', 15, 30, 15),
    ('steane-ec', 30, 45, 30),
    ('prep-plus-qt-verified', 17, 17, 44),
    ('prep-zero-sym', 16, 16, 22),
])
def test_protocol_resources(qt, qsym, kind, ancilla, total, gates):
    report = faultlab.count_resources(circuits.build_protocol(kind, qt, qsym))
    assert (report.ancilla_qubits, report.total_qubits, report.two_qubit_gates) == \
        (ancilla, total, gates)


def test_resource_table(qt, qsym):
    table = faultlab.resource_table(qt, qsym)
    assert table[0]['source'] == 'computed'
    assert table[0]['no_prep'] == {'qubits': [45, 45], 'two_qubit_gates': [30, 30]}
    assert table[0]['with_prep'] == {'qubits': [48, 48], 'two_qubit_gates': [96, 96]}
    assert table[1:] == faultlab.PUBLISHED_RESOURCES


@pytest.mark.slow
def test_sampled_rate_follows_the_quadratic_term(qt, qsym):
    p, shots = 1e-3, 2_000_000
    report = faultlab.estimate_logical_error_rate('hadamard-cz-merged', p, shots, seed=5,
                                                  qt=qt, qsym=qsym)
    expected = 105 * p ** 2
    sigma = math.sqrt(expected * (1 - expected) / shots)
    assert report.failures > 0
    assert abs(report.rate - expected) <= 3 * sigma


@pytest.mark.slow
def test_verification_sweep_up_to_weight_four(qt, qsym):
    report = faultlab.sweep_verification(qt, qsym, max_weight=4)
    assert report.injections == 15 + 105 + 455 + 1365
    assert report.injections == sum(report.outcomes[s] for s in faultlab.STATUSES)
    assert report.outcomes['rejection_mismatch'] == 0
    assert report.outcomes['accepted_single_failures'] == 0
    # X1 X9 commutes with every extra generator and is still corrected after switching
    assert 'X1 X9' not in report.failures
    # pairs among qubits 12, 14 and 15 match a single flip on 13 and complete a logical X
    pairs = sorted(f for f in report.failures if len(f.split()) == 2)
    assert pairs == ['X12 X14', 'X12 X15', 'X14 X15']
