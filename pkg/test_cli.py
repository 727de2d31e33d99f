import click
import orjson
import pytest
from click.testing import CliRunner
from marshmallow import ValidationError

from src.main import cli
from src.models.reports import EnumerationReport, PairReport, ResourceReport


@pytest.fixture
def invoke():
    runner = CliRunner()

    def run(*args):
        result = runner.invoke(cli, [str(a) for a in args])
        # log records may precede the report on the combined stream
        report = orjson.loads(result.output.strip().splitlines()[-1])
        return result.exit_code, report
    return run


def test_check_triorthogonal(invoke, data_path, tmp_path):
    code, report = invoke('check-triorthogonal', data_path('example15.g'))
    assert code == 0
    assert report['subcommand'] == 'check-triorthogonal'
    assert report['payload']['triorthogonal']
    assert (report['payload']['k'], report['payload']['m']) == (1, 4)

    bad = tmp_path / 'bad.g'
    bad.write_text('1100\n0110\n')
    code, report = invoke('check-triorthogonal', bad)
    assert code == 1
    assert report['status'] == 'false'
    assert report['payload']['violations']['pairs'] == [[1, 2]]

    broken = tmp_path / 'broken.g'
    broken.write_text('11x0\n')
    code, report = invoke('check-triorthogonal', broken)
    assert code == 2
    assert report['status'] == 'error'
    assert report['payload']['error'] == 'ParseError'


def test_distance(invoke, data_path):
    code, report = invoke('distance', data_path('example15_qt.bundle'))
    assert code == 0
    assert (report['payload']['dx'], report['payload']['dz']) == (7, 3)


def test_check_transversality(invoke, data_path):
    code, report = invoke('check-transversality', '--a', data_path('example15_qt.bundle'),
                          '--b', data_path('example15_sym.bundle'))
    assert code == 0
    assert report['payload']['cnot_forward'] and report['payload']['cz']
    assert not report['payload']['cnot_backward']


def test_gen_symmetric_writes_bundles(invoke, data_path, tmp_path):
    code, report = invoke('gen-symmetric', data_path('example15_qt.bundle'), '--limit', 2,
                          '--out', tmp_path)
    assert code == 0
    assert report['payload']['count'] == 2
    assert sorted(p.name for p in tmp_path.iterdir()) == ['qsym-1.bundle', 'qsym.bundle']


def test_resources(invoke):
    code, report = invoke('resources', '--protocol', 'teleport-t-to-sym-ec', '--with-prep')
    assert code == 0
    payload = report['payload']
    assert (payload['total_qubits'], payload['two_qubit_gates']) == (48, 96)
    assert 'published' in report['provenance']['published']


def test_simulate(invoke):
    code, report = invoke('simulate', '--protocol', 'hadamard-cz', '--input', '+',
                          '--seed', 4)
    assert code == 0
    assert report['payload']['matches']
    assert report['payload']['expected'] == '0'


def test_simulate_rejects_bad_injection(invoke):
    code, report = invoke('simulate', '--protocol', 'hadamard-cz', '--inject', 'nonsense')
    assert code == 2
    assert report['payload']['error'] == 'ParseError'


def test_show_circuit(invoke):
    code, report = invoke('show-circuit', '--protocol', 'prep-zero-sym')
    assert code == 0
    assert 'PREP anc 0 cost=19' in report['payload']['text']


def test_enumerate_errors(invoke):
    code, report = invoke('enumerate-errors', '--protocol', 'hadamard-cz-merged',
                          '--weight', 1, '--workers', 1)
    assert code == 0
    assert report['payload']['coefficient'] == 0
    assert report['payload']['total'] == 30


def test_every_command_documents_itself():
    runner = CliRunner()
    ctx = click.Context(cli)
    names = cli.list_commands(ctx)
    assert {'check-triorthogonal', 'simulate', 'enumerate-errors', 'sample'} <= set(names)
    for name in names:
        command = cli.get_command(ctx, name)
        result = runner.invoke(cli, [name, '--help'])
        assert result.exit_code == 0, name
        assert command.help
        assert ' '.join(command.help.split()) in ' '.join(result.output.split())


def test_enumerate_errors_reports_the_quadratic_coefficient(invoke):
    code, report = invoke('enumerate-errors', '--protocol', 'hadamard-cz-merged',
                          '--weight', 2, '--workers', 1)
    assert code == 0
    assert report['payload']['coefficient'] == 105
    loaded = EnumerationReport.from_dict(report['payload'])
    assert (loaded.total, loaded.mode, loaded.policy) == (420, 'input', 'merged')
    assert loaded.to_dict() == report['payload']


def test_simulate_with_an_injected_error(invoke):
    code, report = invoke('simulate', '--protocol', 'teleport-t-to-sym-ec', '--input', '0',
                          '--inject', '0:data:IIXIIIIXIIIIIII', '--seed', 2)
    assert code == 0
    payload = report['payload']
    assert payload['matches']
    recover = [f for f in payload['feedback'] if 'recover' in f]
    assert recover[0]['support'] == [3, 8]


def test_printed_reports_load_back(invoke, data_path):
    _, report = invoke('check-transversality', '--a', data_path('example15_qt.bundle'),
                       '--b', data_path('example15_sym.bundle'))
    pair = PairReport.from_dict(report['payload'])
    assert pair.all_true and not pair.cnot_backward
    assert pair.to_dict() == report['payload']

    _, report = invoke('resources', '--protocol', 'hadamard-cz')
    resources = ResourceReport.from_dict(report['payload'])
    assert (resources.total_qubits, resources.two_qubit_gates) == (30, 15)
    assert resources.to_dict().items() <= report['payload'].items()


def test_inconsistent_reports_are_rejected(invoke):
    _, report = invoke('enumerate-errors', '--protocol', 'hadamard-cz-merged',
                       '--weight', 1, '--workers', 1)
    payload = dict(report['payload'], coefficient=3)
    with pytest.raises(ValidationError):
        EnumerationReport.from_dict(payload)
