import os

import click

from src.models.bitmatrix import BitMatrix
from src.routes import (
    as_css, emit, handle_errors, load_request, pretty_option, read_text,
)
from src.services import csscodes, transversal

codes_cli = click.Group('codes')

_PATH = click.Path(exists=True, dir_okay=False)


def _matrix_text(text):
    # accept a bare matrix or a bundle holding a single [G] section
    return '\n'.join(line for line in text.splitlines()
                     if line.strip() not in ('[G]', '[g]'))


@codes_cli.command('check-triorthogonal')
@click.argument('matrix', type=_PATH)
@pretty_option
@handle_errors('check-triorthogonal')
def check_triorthogonal(matrix, pretty):
    """Check the pair and triple overlap conditions of a generator matrix."""
    load_request('check-triorthogonal', paths={'matrix': matrix})
    g = BitMatrix.parse(_matrix_text(read_text(matrix)))
    violations = csscodes.triorthogonality_violations(g)
    ok = not violations['pairs'] and not violations['triples']
    odd = sum(1 for w in g.weights() if w % 2)
    payload = {
        'triorthogonal': ok,
        'n': g.cols,
        'k': odd,
        'm': g.rows - odd,
        'violations': {key: [list(v) for v in value] for key, value in violations.items()},
    }
    if ok:
        code = csscodes.build_triorthogonal_code(g)
        payload['x_transversal'] = csscodes.is_x_transversal(code)
    return emit('check-triorthogonal', payload, {'computed': sorted(payload)},
                'ok' if ok else 'false', pretty)


@codes_cli.command('gen-symmetric')
@click.argument('bundle', type=_PATH)
@click.option('--limit', default=1, show_default=True, type=int,
              help='Number of symmetric companions to return.')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False),
              help='Directory receiving one bundle file per generated code.')
@pretty_option
@handle_errors('gen-symmetric')
def gen_symmetric(bundle, limit, out_dir, pretty):
    """Generate symmetric CSS companions of a T-triorthogonal code."""
    request = load_request('gen-symmetric', paths={'bundle': bundle, 'out': out_dir},
                           limit=limit)
    qt = csscodes.read_bundle(bundle, 'qt')
    generated = csscodes.generate_symmetric_codes(qt, request.limit)
    entries = []
    for code in generated:
        entry = code.to_dict()
        entry['parameters'] = csscodes.code_parameters(code).to_dict()
        entries.append(entry)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
            path = os.path.join(out_dir, f'{code.name}.bundle')
            with open(path, 'w', encoding='utf-8') as fh:
                fh.write(csscodes.format_bundle(code))
            entry['path'] = path
    return emit('gen-symmetric', {'count': len(entries), 'codes': entries},
                {'computed': ['count', 'codes']}, pretty=pretty)


@codes_cli.command('check-transversality')
@click.option('--a', 'a_path', required=True, type=_PATH, help='First code bundle.')
@click.option('--b', 'b_path', required=True, type=_PATH, help='Second code bundle.')
@click.option('--exact-cz', is_flag=True, help='Check the exact bilinear CZ conditions.')
@pretty_option
@handle_errors('check-transversality')
def check_transversality(a_path, b_path, exact_cz, pretty):
    """Transversal CNOT (both directions) and CZ conditions for a code pair."""
    load_request('check-transversality', paths={'a': a_path, 'b': b_path}, exact_cz=exact_cz)
    a = as_css(csscodes.read_bundle(a_path, 'a'))
    b = as_css(csscodes.read_bundle(b_path, 'b'))
    report = transversal.check_pair(a, b, exact_cz=exact_cz)
    return emit('check-transversality', report.to_dict(), {'computed': ['cnot', 'cz']},
                'ok' if report.all_true else 'false', pretty)


@codes_cli.command('distance')
@click.argument('bundle', type=_PATH)
@pretty_option
@handle_errors('distance')
def distance(bundle, pretty):
    """Exhaustive X and Z distances of a code."""
    load_request('distance', paths={'bundle': bundle})
    code = as_css(csscodes.read_bundle(bundle))
    params = csscodes.code_parameters(code)
    return emit('distance', params.to_dict(), {'computed': ['n', 'k', 'd', 'dx', 'dz']},
                pretty=pretty)
