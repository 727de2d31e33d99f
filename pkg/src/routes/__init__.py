"""
Shared plumbing for the command groups: report emission, error handling,
request validation and code loading.
"""
import logging
from functools import wraps

import click
import orjson
from marshmallow import ValidationError

from src.config import get_config
from src.errors import ParseError, TriorthoError
from src.models.code import TriorthogonalCode
from src.models.reports import CommandRequestSchema, JsonReport
from src.services import csscodes

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


def emit(subcommand, payload, provenance=None, status='ok', pretty=False):
    """Print a JsonReport on stdout and return the exit code it implies."""
    report = JsonReport(get_config().SCHEMA_VERSION, subcommand, payload,
                        provenance or {}, status)
    option = orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY
    if pretty:
        option |= orjson.OPT_INDENT_2
    click.echo(orjson.dumps(report.to_dict(), option=option).decode())
    return {'ok': EXIT_OK, 'false': EXIT_FALSE}.get(status, EXIT_INPUT)


def handle_errors(subcommand):
    """Decorator turning toolkit errors into an error report with exit status 2"""
    def decorator(f):
        @wraps(f)
        def decorated(*args, **kwargs):
            pretty = kwargs.get('pretty', False)
            try:
                code = f(*args, **kwargs)
            except TriorthoError as e:
                logger.warning('%s failed: %s', subcommand, e.message)
                code = emit(subcommand, e.to_dict(), status='error', pretty=pretty)
            raise SystemExit(code or EXIT_OK)
        return decorated
    return decorator


def load_request(subcommand, **fields):
    """Validate the numeric parameters of a command."""
    data = {'subcommand': subcommand}
    for key in ('weight', 'limit', 'seed'):
        if fields.get(key) is not None:
            data[key] = fields.pop(key)
    data['paths'] = {k: v for k, v in fields.pop('paths', {}).items() if v is not None}
    data['flags'] = fields
    try:
        return CommandRequestSchema().load(data)
    except ValidationError as e:
        raise ParseError('invalid command parameters', fields=e.messages)


def read_text(path):
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            return fh.read()
    except OSError as e:
        raise ParseError(f'cannot read {path}: {e.strerror}')


def load_pair(qt_path=None, qsym_path=None):
    """The T-triorthogonal code and its symmetric companion, defaulting to the 15-qubit example."""
    if qt_path is None:
        qt = csscodes.example_15()
    else:
        qt = csscodes.read_bundle(qt_path, 'qt')
        if not isinstance(qt, TriorthogonalCode):
            raise ParseError(f'{qt_path} holds no [G] matrix')
    if qsym_path is not None:
        return qt, csscodes.read_bundle(qsym_path, 'qsym')
    if qt_path is None:
        return csscodes.example_pair()
    return qt, csscodes.generate_symmetric_codes(qt, limit=1)[0]


def as_css(code):
    return code.base if isinstance(code, TriorthogonalCode) else code


pretty_option = click.option('--pretty', is_flag=True, help='Indent the JSON report.')
qt_option = click.option('--qt', 'qt_path', type=click.Path(exists=True, dir_okay=False),
                         help='Bundle with the [G] matrix of the T-triorthogonal code.')
qsym_option = click.option('--qsym', 'qsym_path', type=click.Path(exists=True, dir_okay=False),
                           help='Bundle of the symmetric companion code.')
