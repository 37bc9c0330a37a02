from typing import Dict, List, Mapping, Optional, Sequence

from pathlib import Path
import json
import logging

import pandas as pd

from .config import SCHEMA_VERSION


logger = logging.getLogger(__name__)


def default_report_path(lattice_name: str, command: str, reports_dir: str = 'reports') -> str:
    return f'{reports_dir}/{lattice_name or "lattice"}_{command}.json'


def save_report(out: str,
                report: dict,
                tables: Optional[Mapping[str, pd.DataFrame]] = None,
                argv: Optional[Sequence[str]] = None,
                save_index: bool = False,
                write_script: bool = True) -> List[str]:
    """
    Saves a report together with the tables behind it and a script that
    re-runs the command producing it. This allows the report to be
    regenerated later from the same input, cutoff and seed.

    Args:
        out: Path of the JSON report. Tables and the script are written
            next to it as <stem>_<table>.csv and <stem>_reproduce.py.
        report: JSON-serialisable dictionary. A "schema_version" field is
            added and keys are sorted, so equal reports are equal byte
            for byte.
        tables: Tabular parts of the report (structure constants, census,
            group orders), one csv file each.
        argv: Command line arguments of the run, without the program name.
            Required for the reproduction script.
        save_index: Whether to save the index of each table. Default is False.
        write_script: Whether to write the reproduction script.

    Returns:
        The paths written, report first.

    Example Usage:

        ```python
        save_report('reports/A1_zhu.json', {'dim': 2},
                    tables={'table': pd.DataFrame({'i': [0], 'j': [0], 'coefficient': ['1']})},
                    argv=['--input', 'A1.json', 'zhu'])
        ```

        This will create the files reports/A1_zhu.json,
        reports/A1_zhu_table.csv and reports/A1_zhu_reproduce.py.
    """
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    stem = path.with_suffix('')

    payload = dict(report)
    payload['schema_version'] = SCHEMA_VERSION
    with open(path, 'w') as f:
        json.dump(payload, f, sort_keys=True, indent=2)
        f.write('\n')
    written = [str(path)]

    for name, df in sorted((tables or {}).items()):
        csv_path = f'{stem}_{name}.csv'
        df.to_csv(csv_path, index=save_index)
        written.append(csv_path)

    if write_script and argv is not None:
        script_path = f'{stem}_reproduce.py'
        try:
            with open(script_path, 'w') as f:
                f.write(build_reproduce_script(argv))
            written.append(script_path)
        except OSError as e:
            logger.warning('Failed to save reproduction script: %s', e)

    logger.info('report written to %s (%d files)', path, len(written))
    return written


def build_reproduce_script(argv: Sequence[str]) -> str:
    """Source of a script that re-runs the command with the recorded arguments."""
    return f"""import sys

from lattice_twisted_zhu.cli import main


def reproduce_report():
    return main({list(argv)!r})


if __name__ == '__main__':
    sys.exit(reproduce_report())
"""


def table_frame(table: Sequence[Sequence[Sequence[str]]]) -> pd.DataFrame:
    """Long form of a structure-constant table: one row per non-zero (i, j, k) entry."""
    rows = [{'i': i, 'j': j, 'k': k, 'coefficient': c}
            for i, row in enumerate(table)
            for j, entry in enumerate(row)
            for k, c in enumerate(entry) if c != '0/1']
    return pd.DataFrame(rows, columns=['i', 'j', 'k', 'coefficient'])


def records_frame(records: Sequence[Dict], columns: Optional[Sequence[str]] = None) -> pd.DataFrame:
    return pd.DataFrame(list(records), columns=columns)
