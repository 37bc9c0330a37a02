import json
import os
import subprocess
import sys

import pandas as pd

from ..cli import EXIT_OK, main
from ..config import SCHEMA_VERSION
from ..reporting import build_reproduce_script, default_report_path, save_report, table_frame


def test_save_report(tmp_path):
    """Test save_report."""
    out = tmp_path / 'reports' / 'A1_zhu.json'
    tables = {'table': pd.DataFrame({'i': [0, 1], 'coefficient': ['1/1', '-1/16']})}
    written = save_report(str(out), {'dim': 2, 'b': 1}, tables, argv=['--input', 'A1.json', 'zhu'])

    assert written[0] == str(out)
    assert (tmp_path / 'reports' / 'A1_zhu_table.csv').exists()
    assert (tmp_path / 'reports' / 'A1_zhu_reproduce.py').exists()

    text = out.read_text()
    data = json.loads(text)
    assert data['schema_version'] == SCHEMA_VERSION
    assert list(data) == sorted(data)

    frame = pd.read_csv(tmp_path / 'reports' / 'A1_zhu_table.csv')
    assert list(frame['coefficient']) == ['1/1', '-1/16']


def test_reports_are_byte_identical(tmp_path):
    """Reports are byte identical."""
    a, b = tmp_path / 'a.json', tmp_path / 'b.json'
    save_report(str(a), {'z': [1, 2], 'a': {'y': 1, 'x': 2}})
    save_report(str(b), {'a': {'x': 2, 'y': 1}, 'z': [1, 2]})
    assert a.read_bytes() == b.read_bytes()


def test_reproduce_script():
    """Test build_reproduce_script."""
    script = build_reproduce_script(['--input', 'A2.json', '--seed', '3', 'verify'])
    assert "main(['--input', 'A2.json', '--seed', '3', 'verify'])" in script
    compile(script, 'reproduce.py', 'exec')


def test_table_frame_drops_zeros():
    """Table frame drops zeros."""
    frame = table_frame([[['1/1', '0/1'], ['0/1', '1/1']], [['0/1', '1/1'], ['-1/16', '0/1']]])
    assert len(frame) == 4
    assert list(frame.columns) == ['i', 'j', 'k', 'coefficient']


def test_default_report_path():
    """Test default_report_path."""
    assert default_report_path('A2', 'zhu') == 'reports/A2_zhu.json'
    assert default_report_path('', 'lattice') == 'reports/lattice_lattice.json'


def test_reproduce_script_rebuilds_the_report(tmp_path):
    """The saved reproduction script rewrites the report byte for byte."""
    lattice = tmp_path / 'A1.json'
    lattice.write_text(json.dumps({'name': 'A1', 'gram': [[2]]}))
    out = tmp_path / 'A1_zhu.json'
    assert main(['--input', str(lattice), '--out', str(out), 'zhu']) == EXIT_OK
    first = out.read_bytes()
    out.unlink()

    root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    env = dict(os.environ, PYTHONPATH=os.pathsep.join(filter(None, [root, os.environ.get('PYTHONPATH')])))
    result = subprocess.run([sys.executable or 'python', str(tmp_path / 'A1_zhu_reproduce.py')],
                            cwd=str(tmp_path), env=env, capture_output=True)
    assert result.returncode == 0, result.stderr.decode()
    assert out.read_bytes() == first
