import json

import pytest

from ..cli import EXIT_INCONSISTENT, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main


@pytest.fixture
def lattice_file(tmp_path):
    def write(gram, name='L'):
        path = tmp_path / f'{name}.json'
        path.write_text(json.dumps({'name': name, 'gram': gram}))
        return str(path)
    return write


def test_zhu_command(lattice_file, tmp_path, capsys):
    """Zhu command."""
    out = tmp_path / 'zhu.json'
    code = main(['--input', lattice_file([[2]], 'A1'), '--out', str(out), 'zhu'])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert report['zhu']['dim'] == 2
    assert len(report['zhu']['table']) == 2
    assert report['zhu']['iso_group_algebra']
    assert report['zhu']['rationality_certificate']['omega_constant'] == '1/16'
    assert report['zhu']['iota_e_2alpha'] == {'[2]': ['-1/256', '0/1']}
    assert report['zhu']['table_basis'] == 'iota(e_beta_i)'
    assert report['zhu']['u_table'][1][1] == ['-1/1', '0/1']
    assert {step['rule'] for step in report['zhu']['traces']['[2]']} >= {'theta-even'}
    assert report['seed'] == 0
    assert 'dim A_theta = 2' in capsys.readouterr().out


def test_lattice_command(lattice_file, tmp_path):
    """Lattice command."""
    out = tmp_path / 'lattice.json'
    assert main(['--input', lattice_file([[2, -1], [-1, 2]], 'A2'), '--out', str(out), 'lattice']) == EXIT_OK
    report = json.loads(out.read_text())['lattice']
    assert report['det'] == 3
    assert report['order_O_L'] == 12
    assert report['roots'] == 6
    assert (tmp_path / 'lattice_cosets.csv').exists()


def test_extension_and_twisted_commands(lattice_file, tmp_path):
    """Extension and twisted commands."""
    path = lattice_file([[2, 0], [0, 2]], 'A1xA1')
    out = tmp_path / 'ext.json'
    assert main(['--input', path, '--out', str(out), 'extension']) == EXIT_OK
    assert json.loads(out.read_text())['extension']['census']['dims'] == [1, 1, 1, 1]
    out = tmp_path / 'tw.json'
    assert main(['--input', path, '--out', str(out), '--cutoff', '2', 'twisted']) == EXIT_OK
    twisted = json.loads(out.read_text())['twisted']
    assert twisted['normalization'] == 'full'
    assert [m['top_weight'] for m in twisted['modules']] == ['1/8'] * 4


def test_aut_command(lattice_file, tmp_path):
    """Aut command."""
    out = tmp_path / 'aut.json'
    assert main(['--input', lattice_file([[2]], 'A1'), '--out', str(out), '--cutoff', '3', 'aut']) == EXIT_OK
    report = json.loads(out.read_text())['aut']
    assert report['order_O_Lhat'] == 4
    assert set(report['verification'].values()) == {'ok'}


def test_verify_command(lattice_file, tmp_path):
    """Verify command."""
    out = tmp_path / 'verify.json'
    code = main(['--input', lattice_file([[2]], 'A1'), '--out', str(out),
                 '--cutoff', '2', '--samples', '10', 'verify'])
    assert code == EXIT_OK
    assert json.loads(out.read_text())['verify']['passed']


def test_reports_are_deterministic(lattice_file, tmp_path):
    """Reports are deterministic."""
    path = lattice_file([[2]], 'A1')
    a, b = tmp_path / 'a' / 'r.json', tmp_path / 'b' / 'r.json'
    main(['--input', path, '--out', str(a), 'zhu'])
    main(['--input', path, '--out', str(b), 'zhu'])
    assert a.read_bytes() == b.read_bytes()


def test_odd_gram_exits_with_validation_error(lattice_file, tmp_path, capsys):
    """Odd gram exits with validation error."""
    code = main(['--input', lattice_file([[1]], 'odd'), '--out', str(tmp_path / 'x.json'), 'lattice'])
    assert code == EXIT_VALIDATION
    assert 'NotEven' in capsys.readouterr().err


def test_usage_errors(lattice_file):
    """Usage errors."""
    assert main(['--input', lattice_file([[2]]), 'frobnicate']) == EXIT_USAGE
    assert main(['zhu']) == EXIT_USAGE
    assert main(['--input', lattice_file([[2]]), '--cutoff', '1', 'zhu']) == EXIT_USAGE


def test_missing_file(tmp_path):
    """A missing lattice file is invalid input."""
    assert main(['--input', str(tmp_path / 'nope.json'), 'lattice']) == EXIT_VALIDATION


def test_exit_codes_are_distinct():
    """Exit codes are distinct."""
    assert len({EXIT_OK, EXIT_VALIDATION, EXIT_INCONSISTENT, EXIT_USAGE}) == 4


def test_malformed_gram_exits_with_validation_error(tmp_path, capsys):
    """A Gram matrix that is not a list of rows is rejected as invalid input."""
    path = tmp_path / 'bad.json'
    path.write_text(json.dumps({'gram': [2]}))
    code = main(['--input', str(path), '--out', str(tmp_path / 'x.json'), 'lattice'])
    assert code == EXIT_VALIDATION
    assert 'ValidationError' in capsys.readouterr().err


@pytest.mark.slow
def test_verify_command_on_A2(lattice_file, tmp_path):
    """verify passes on A2 at cutoff 3."""
    out = tmp_path / 'verify.json'
    code = main(['--input', lattice_file([[2, -1], [-1, 2]], 'A2'), '--out', str(out),
                 '--cutoff', '3', '--samples', '10', 'verify'])
    assert code == EXIT_OK
    assert json.loads(out.read_text())['verify']['passed']
