"""
Regeneration of the reference numeric tables and comparison with golden values.

Each generator returns a Table whose rows can be written as CSV and diffed
against golden/<table_id>.csv. When no golden file exists the bundled
reference values below are used.
"""

import csv
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from config.error_handling import ValidationError
from models.core import EngineConfig, GoldenMismatch, Table
from models.polynomial import IntPoly
from services.asymptotics import li, round_half_away
from services.bhconstant import ck_constant, index_checkpoints
from services.census import Census
from services.polynomial import check_family
from services.primes import PrimeSieve

logger = logging.getLogger(__name__)

PAIR_SHIFTS = (2, 4, 6, 8, 10, 12, 30)
FLOAT_TOLERANCE = 5e-5

GOLDEN: Dict[str, Tuple[List[str], List[Tuple]]] = {
    'loglint': (
        ['x', 'pi', 'li', 'x_over_log'],
        [
            (10**3, 168, 177, 145),
            (10**4, 1229, 1245, 1086),
            (10**5, 9592, 9629, 8686),
            (10**6, 78498, 78627, 72382),
            (10**7, 664579, 664917, 620421),
            (10**8, 5761455, 5762208, 5428681),
            (10**9, 50847534, 50849234, 48254942),
            (10**10, 455052511, 455055614, 434294482),
            (10**11, 4118054813, 4118066400, 3948131654),
            (10**12, 37607912018, 37607950280, 36191206825),
        ],
    ),
    'disagree': (
        ['N', 'Q', 'half_li', 'ratio'],
        [
            (10**2, 19, 15, 1.3067),
            (10**3, 112, 88, 1.26866),
            (10**4, 841, 623, 1.3509),
            (10**5, 6656, 4814, 1.38252),
            (10**6, 54110, 39313, 1.37638),
            (10**7, 456362, 332459, 1.37269),
            (10**8, 3954181, 2881104, 1.37245),
            (10**9, 34900213, 25424617, 1.37269),
        ],
    ),
    'divergezero': (
        ['n', 'value'],
        [
            (10, 0.210114),
            (10**2, 0.117208),
            (10**3, 0.0824772),
            (10**4, 0.0641136),
            (10**5, 0.0526554),
            (10**6, 0.044777),
            (10**7, 0.0390052),
        ],
    ),
    'ck': (
        ['k', 'C_k'],
        list(zip(range(2, 151, 2), [
            0.660162, 0.660162, 1.32032, 0.660162, 0.880216, 1.32032, 0.792194, 0.660162,
            1.32032, 0.880216, 0.733513, 1.32032, 0.720177, 0.792194, 1.76043, 0.660162,
            0.704173, 1.32032, 0.698995, 0.880216, 1.58439, 0.733513, 0.691598, 1.32032,
            0.880216, 0.720177, 1.32032, 0.792194, 0.684612, 1.76043, 0.682926, 0.660162,
            1.46703, 0.704173, 1.05626, 1.32032, 0.679024, 0.698995, 1.44035, 0.880216,
            0.677089, 1.58439, 0.676263, 0.733513, 1.76043, 0.691598, 0.674832, 1.32032,
            0.792194, 0.880216, 1.40835, 0.720177, 0.673106, 1.32032, 0.978018, 0.792194,
            1.39799, 0.684612, 0.671744, 1.76043, 0.671351, 0.682926, 1.58439, 0.660162,
            0.960235, 1.46703, 0.670318, 0.704173, 1.3832, 1.05626, 0.669729, 1.32032,
            0.66946, 0.679024, 1.76043,
        ])),
    ),
    'pis': (
        ['n'] + [f'pi{k}' for k in PAIR_SHIFTS],
        [
            (2, 25, 27, 48, 24, 33, 48, 61),
            (3, 174, 170, 343, 178, 230, 340, 456),
            (4, 1270, 1264, 2538, 1303, 1682, 2515, 3450),
            (5, 10250, 10214, 20472, 10336, 13653, 20462, 27434),
            (6, 86027, 85834, 170910, 85866, 114394, 171618, 228548),
            (7, 738597, 738718, 1477321, 738005, 984809, 1477496, 1970049),
            (8, 6497407, 6496372, 12992625, 6497273, 8667364, 12994918, 17331689),
        ],
    ),
}

TABLE_IDS = tuple(GOLDEN)


def _decades(lo_exp: int, hi: int) -> List[int]:
    values = []
    e = lo_exp
    while 10**e <= hi:
        values.append(10**e)
        e += 1
    return values


class TableGenerator:
    """Builds the reference tables from one shared sieve."""

    def __init__(self, sieve: Optional[PrimeSieve] = None, config: Optional[EngineConfig] = None):
        self.sieve = sieve or PrimeSieve(config)
        self.config = config or self.sieve.config
        self.census = Census(self.sieve, self.config)

    def generate(self, table_id: str, limit: Optional[int] = None) -> Table:
        """
        Regenerate a table up to `limit`: the largest x for loglint and
        disagree, the largest prime index for divergezero, the last shift for
        ck, and the largest exponent n for pis.
        """
        builders = {
            'loglint': (self.loglint, 10**6),
            'disagree': (self.disagree, 10**6),
            'divergezero': (self.divergezero, 10**6),
            'ck': (self.ck, 150),
            'pis': (self.pis, 4),
        }
        if table_id not in builders:
            raise ValidationError(f"unknown table '{table_id}'; choose from {', '.join(TABLE_IDS)}")
        builder, default = builders[table_id]
        return builder(default if limit is None else limit)

    def loglint(self, max_x: int = 10**6) -> Table:
        """pi(x), Li(x) and x/log x at powers of ten."""
        self.sieve.guard.check_scale(x=max_x)
        rows = []
        previous, pi = 0, 0
        for x in _decades(3, max_x):
            pi += self.sieve.count_primes(previous, x + 1)
            previous = x + 1
            rows.append({
                'x': x,
                'pi': pi,
                'li': round_half_away(li(x)),
                'x_over_log': round_half_away(x / math.log(x)),
            })
        return Table('loglint', GOLDEN['loglint'][0], rows, key='x')

    def disagree(self, max_n: int = 10**6) -> Table:
        """Q(t^2+1; N) beside the half-Li prediction and their ratio."""
        family = check_family([IntPoly((1, 0, 1))])
        bounds = _decades(2, max_n)
        rows = []
        for n, q in self.census.cumulative_q(family, bounds):
            half = li(n) / 2
            rows.append({'N': n, 'Q': q, 'half_li': round_half_away(half), 'ratio': q / half})
        return Table('disagree', GOLDEN['disagree'][0], rows, key='N')

    def divergezero(self, max_index: int = 10**6) -> Table:
        """Partial products of t^2-1 up to the n-th prime."""
        family = check_family([IntPoly((-1, 0, 1))], override=True)
        counts = _decades(1, max_index)
        rows = [{'n': n, 'value': v}
                for n, v in index_checkpoints(family, counts, self.sieve, self.config)]
        return Table('divergezero', GOLDEN['divergezero'][0], rows, key='n')

    def ck(self, through: int = 150, prime_bound: int = 10**6) -> Table:
        """C_k for even k up to `through`."""
        if through < 2:
            raise ValidationError(f"ck table needs through >= 2, got {through}")
        rows = [{'k': k, 'C_k': ck_constant(k, prime_bound, self.sieve, self.config).value}
                for k in range(2, through + 1, 2)]
        return Table('ck', GOLDEN['ck'][0], rows, key='k')

    def pis(self, max_exponent: int = 4) -> Table:
        """pi_k among the first 10^n primes for the reference shifts."""
        if max_exponent < 2:
            raise ValidationError(f"pis table starts at n = 2, got {max_exponent}")
        rows = []
        for n in range(2, max_exponent + 1):
            row: Dict[str, Any] = {'n': n}
            for k in PAIR_SHIFTS:
                row[f'pi{k}'] = self.census.count_pairs(k, first_primes=10**n).empirical
            rows.append(row)
            logger.info(f"Pair counts among the first 10^{n} primes done")
        return Table('pis', GOLDEN['pis'][0], rows, key='n')


def _parse_cell(text: str) -> Any:
    try:
        return int(text)
    except ValueError:
        return float(text)


def load_golden(table_id: str, golden_dir: Optional[str] = None) -> Dict[Any, Dict[str, Any]]:
    """Golden rows keyed by the table's key column."""
    if table_id not in GOLDEN:
        raise ValidationError(f"unknown table '{table_id}'")
    columns, tuples = GOLDEN[table_id]
    path = Path(golden_dir) / f"{table_id}.csv" if golden_dir else None
    if path is not None and path.exists():
        with open(path, newline='') as handle:
            rows = [{c: _parse_cell(v) for c, v in row.items()} for row in csv.DictReader(handle)]
        logger.debug(f"Loaded {len(rows)} golden rows from {path}")
    else:
        rows = [dict(zip(columns, values)) for values in tuples]
    return {row[columns[0]]: row for row in rows}


def cells_agree(expected: Any, actual: Any) -> bool:
    """Integers exactly, floats to 5 significant digits."""
    if isinstance(expected, int) and isinstance(actual, int):
        return expected == actual
    return math.isclose(float(actual), float(expected), rel_tol=FLOAT_TOLERANCE)


def diff_against_golden(table: Table, golden_dir: Optional[str] = None) -> List[GoldenMismatch]:
    """Cells of `table` that disagree with golden rows sharing their key."""
    golden = load_golden(table.table_id, golden_dir)
    mismatches = []
    for row in table.rows:
        reference = golden.get(row[table.key])
        if reference is None:
            continue
        for column in table.columns:
            if column == table.key or column not in reference:
                continue
            if not cells_agree(reference[column], row[column]):
                mismatches.append(GoldenMismatch(table.table_id, row[table.key], column,
                                                 reference[column], row[column]))
    return mismatches
