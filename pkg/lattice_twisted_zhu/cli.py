"""
Batch front door: one command per run, one JSON report per command.

    python -m lattice_twisted_zhu --input A1.json --cutoff 4 zhu

`all` chains lattice, extension, twisted, zhu and aut into one report; it
does not run verify, which has its own command.

Exit codes: 0 success, 1 invalid input, 2 internal inconsistency or a
failed verification, 64 usage.
"""
from typing import Dict, List, Optional, Sequence, Tuple
import argparse
import logging
import sys

import pandas as pd
import sympy

from .aut import aut_report, hom_L_Z2, theta_lift, verify_automorphism
from .checks import all_passed, run_checks
from .config import (COMMANDS, DEFAULT_CUTOFF, DEFAULT_NORMALIZATION, DEFAULT_SEED,
                     MAX_ISOMETRY_RANK, NORMALIZATIONS, RunConfig)
from .errors import LatticeVOAError, ValidationError
from .extension import ExtensionData, build_extension, lift
from .fock import exp_state, format_scalar
from .lattice import GramMatrix, compute_R, cosets_mod_2L, isometry_group, load_lattice, short_vectors
from .reporting import default_report_path, records_frame, save_report, table_frame
from .voa import LatticeVOA
from .zhu import (build_zhu, check_group_algebra_iso, heisenberg_zhu_certificate,
                  semisimplicity_and_rationality, zhu_structure)


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INCONSISTENT = 2
EXIT_USAGE = 64

Report = Tuple[dict, Dict[str, pd.DataFrame], List[str]]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='lattice_twisted_zhu',
                     description='Twisted Zhu algebras and twisted modules of lattice VOAs.')
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--input', required=True, help='lattice file {"name": ..., "gram": [[...]]}')
    parser.add_argument('--cutoff', type=int, default=DEFAULT_CUTOFF, help='weight cutoff')
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED, help='seed of the randomised checks')
    parser.add_argument('--out', default=None, help='report path, default reports/<name>_<command>.json')
    parser.add_argument('--normalization', choices=NORMALIZATIONS, default=DEFAULT_NORMALIZATION)
    parser.add_argument('--samples', type=int, default=100, help='random states in the dual-path check')
    parser.add_argument('--log-level', type=str.upper, default='WARNING',
                        choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'))
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(list(argv))
    try:
        return RunConfig(command=args.command, input=args.input, cutoff=args.cutoff,
                         out=args.out, seed=args.seed, normalization=args.normalization,
                         log_level=args.log_level, samples=args.samples)
    except ValueError as e:
        raise UsageError(str(e))


def _matrix(M: sympy.Matrix) -> List[List[str]]:
    return [[format_scalar(x) for x in row] for row in M.tolist()]


def _frac(x) -> str:
    return format_scalar(x)


def lattice_report(gram: GramMatrix) -> Report:
    cosets = cosets_mod_2L(gram)
    R = compute_R(gram, cosets)
    report = {
        'name': gram.name,
        'gram': [list(row) for row in gram.entries],
        'rank': gram.dim,
        'det': int(sympy.Matrix(gram.entries).det()),
        'coset_reps': [list(v) for v in cosets.reps],
        'R_basis': [list(v) for v in R.basis],
        'R_reps': [list(v) for v in R.reps],
        'roots': len(short_vectors(gram, 2)),
    }
    if gram.dim <= MAX_ISOMETRY_RANK:
        report['order_O_L'] = len(isometry_group(gram))
    tables = {'cosets': records_frame([{'index': i, 'rep': str(v), 'norm': gram.norm(v),
                                        'in_R': i in R.rep_indices}
                                       for i, v in enumerate(cosets.reps)])}
    summary = [f'lattice {gram.name or gram.entries}: rank {gram.dim}, det {report["det"]}, '
               f'{len(cosets)} cosets of 2L, {len(R.reps)} in R']
    return report, tables, summary


def extension_report(extension: ExtensionData) -> Report:
    Q = extension.Q
    gram = extension.gram
    generators = [Q.element_of(lift(gram.basis_vector(i))) for i in range(gram.dim)]
    modules = []
    for chi, module in zip(extension.characters, extension.modules):
        modules.append({
            'dim': module.dim,
            'character': [{'element': list(Q.elements[g]), 'value': _frac(v)}
                          for g, v in sorted(chi.values.items())],
            'generators': [_matrix(module.matrix(g)) for g in generators],
            'minus_one': _matrix(module.matrix(Q.minus_one)),
        })
    report = {
        'cocycle': [list(row) for row in extension.cocycle.table],
        'census': extension.census(),
        'K_sample': [[k.sign, list(k.vec)] for k in extension.K.elements()],
        'Q_elements': [list(e) for e in Q.elements],
        'Q_table': Q.mul,
        'center': Q.center(),
        'modules': modules,
    }
    census = extension.census()
    tables = {
        'census': records_frame([{'module': i, 'dim': m.dim} for i, m in enumerate(extension.modules)]),
        'quotient': records_frame([{'g': g, 'h': h, 'gh': Q.mul[g][h]}
                                   for g in range(Q.order) for h in range(Q.order)]),
    }
    summary = [f'|L^/K| = {Q.order}, {census["central_characters"]} modules T_chi of dims {census["dims"]}']
    return report, tables, summary


def twisted_report(modules, normalization: str, cutoff: int) -> Report:
    voa = modules[0].voa
    omega = voa.omega()
    entries = []
    rows = []
    for i, module in enumerate(modules):
        dims = module.graded_dimensions(cutoff)
        entries.append({
            'dim': module.dim,
            'top_weight': _frac(module.top_weight),
            'o_omega': _matrix(module.top_level_matrix(omega)),
            'graded_dimensions': {_frac(w): n for w, n in sorted(dims.items())},
        })
        rows += [{'module': i, 'weight': _frac(w), 'dim': n} for w, n in sorted(dims.items())]
    report = {'normalization': normalization, 'modules': entries,
              'mode_convention': 'Y_theta(v, z) = sum_n v_n z^(-n-1), o(v) = v_(wt v - 1)'}
    summary = [f'{len(modules)} irreducible twisted modules, top weight '
               f'{_frac(modules[0].top_weight)}, normalization {normalization}']
    return report, {'graded_dimensions': records_frame(rows)}, summary


def zhu_report(extension, reducer, modules) -> Report:
    structure = zhu_structure(reducer)
    iso = check_group_algebra_iso(structure, extension)
    certificate = semisimplicity_and_rationality(structure, modules)
    heisenberg = heisenberg_zhu_certificate(reducer, modules=modules)
    table = structure.to_json()
    images, traces = {}, {}
    for alpha in extension.cosets.reps:
        if any(alpha):
            two_alpha = tuple(2 * a for a in alpha)
            reduction = reducer.reduce_traced(exp_state(two_alpha))
            images[str(list(two_alpha))] = reduction.element.to_json()
            traces[str(list(two_alpha))] = reduction.trace.to_json()
    report = {
        'dim': structure.dim,
        'reps': [list(b) for b in structure.reps],
        'table': table,
        'table_basis': 'iota(e_beta_i)',
        'u_table': [[cell.to_json() for cell in row] for row in structure.u_table()],
        'center_reps': structure.center_reps(),
        'iso_group_algebra': iso['iso_group_algebra'],
        'rationality_certificate': certificate,
        'heisenberg_certificate': heisenberg,
        'iota_e_2alpha': images,
        'traces': traces,
    }
    summary = [f'dim A_theta = {structure.dim}, isomorphic to C[L^/K]/I: {iso["iso_group_algebra"]}, '
               f'lambda = {certificate["omega_constant"]}']
    return report, {'table': table_frame(table)}, summary


def aut_command_report(gram: GramMatrix, voa: LatticeVOA, cutoff: int) -> Report:
    report = aut_report(gram, voa.cocycle, voa)
    checks = {}
    bad = verify_automorphism(theta_lift(voa.cocycle), voa, cutoff)
    checks['theta'] = str(bad) if bad else 'ok'
    for k, aut in enumerate(hom_L_Z2(gram)):
        bad = verify_automorphism(aut, voa, cutoff)
        checks[f'hom_{k}'] = str(bad) if bad else 'ok'
    report['verification'] = checks
    report['cutoff'] = cutoff
    orders = records_frame([{'group': key, 'order': report[key]}
                            for key in ('order_O_L', 'hom_L_Z2', 'order_O_Lhat')])
    summary = [f'|O(L)| = {report["order_O_L"]}, |O(L^)| = {report["order_O_Lhat"]}, '
               f'dim V_1 = {report["weight_one_dim"]}']
    return report, {'orders': orders}, summary


def verify_report(gram: GramMatrix, config: RunConfig) -> Tuple[dict, Dict[str, pd.DataFrame], List[str], bool]:
    results = run_checks(gram, cutoff=config.cutoff, seed=config.seed,
                         samples=config.samples, normalization=config.normalization)
    passed = all_passed(results)
    report = {'passed': passed, 'checks': [r.to_json() for r in results]}
    table = records_frame([{'check': r.name, 'passed': r.passed, 'detail': r.detail} for r in results])
    summary = [f'{"PASS" if r.passed else "FAIL"}  {r.name}' + (f': {r.detail}' if r.detail else '')
               for r in results]
    return report, {'checks': table}, summary, passed


def run(config: RunConfig, argv: Optional[Sequence[str]] = None) -> int:
    """Computes the report of one command, writes it and returns the exit code."""
    gram = load_lattice(config.input)
    command = config.command
    report: dict = {'command': command, 'input': config.input, 'cutoff': config.cutoff,
                    'seed': config.seed}
    tables: Dict[str, pd.DataFrame] = {}
    summary: List[str] = []
    exit_code = EXIT_OK

    def merge(key: str, part: Report):
        body, part_tables, lines = part
        report[key] = body
        tables.update({f'{key}_{name}' if command == 'all' else name: df
                       for name, df in part_tables.items()})
        summary.extend(lines)

    if command in ('lattice', 'all'):
        merge('lattice', lattice_report(gram))
    if command == 'extension':
        merge('extension', extension_report(build_extension(gram)))
    if command in ('twisted', 'zhu', 'aut', 'all'):
        extension, voa, reducer, modules, normalization = build_zhu(gram, normalization=config.normalization)
        if command == 'all':
            merge('extension', extension_report(extension))
        if command in ('twisted', 'all'):
            merge('twisted', twisted_report(modules, normalization, config.cutoff))
        if command in ('zhu', 'all'):
            merge('zhu', zhu_report(extension, reducer, modules))
        if command in ('aut', 'all'):
            merge('aut', aut_command_report(gram, voa, config.cutoff))
    if command == 'verify':
        body, part_tables, lines, passed = verify_report(gram, config)
        merge('verify', (body, part_tables, lines))
        if not passed:
            exit_code = EXIT_INCONSISTENT

    out = config.out or default_report_path(gram.name, command)
    save_report(out, report, tables, argv=argv)
    for line in summary:
        print(line)
    print(f'report written to {out}')
    return exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = parse_config(argv)
    except UsageError as e:
        print(f'usage error: {e}', file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=config.log_level,
                        format='%(asctime)s %(name)s %(levelname)s %(message)s')
    try:
        return run(config, argv)
    except ValidationError as e:
        logger.error('%s', e)
        print(f'{type(e).__name__}: {e}', file=sys.stderr)
        return EXIT_VALIDATION
    except LatticeVOAError as e:
        logger.error('%s', e)
        print(f'{type(e).__name__}: {e}', file=sys.stderr)
        return EXIT_INCONSISTENT
