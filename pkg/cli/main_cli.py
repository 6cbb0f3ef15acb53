"""
Main CLI implementation using Click framework for the Bateman-Horn toolkit.

Exit codes: 0 success, 1 usage or parse error, 2 inadmissible input,
3 resource budget exceeded.
"""

import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click

from cli.interfaces import ArgumentValidator, CLIInterface
from config import ConfigManager, setup_logging
from config.error_handling import (
    ErrorHandler, GoldenMismatchError, ParseError, ValidationError
)
from core.application import CONSTANT_FORMS, BatemanHornApp
from models.core import ConstantEstimate, OutputFormat, RunConfig
from services.eulersearch import REPRESENTATIVES, RULES
from services.primes import MEISSEL_MERTENS
from services.report_writer import CsvWriter, get_writer, write_report
from services.tables import TABLE_IDS


class BatemanHornCLI(CLIInterface):
    """Output side of the CLI: records to stdout, messages to stderr."""

    def __init__(self):
        self.config_manager = ConfigManager()
        self.logger = logging.getLogger(__name__)
        self.error_handler = ErrorHandler(self.logger)
        self.app: Optional[BatemanHornApp] = None

    def display_records(self, records: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None,
                        output_format: Optional[str] = None) -> None:
        writer = get_writer(output_format or OutputFormat.TABLE.value)
        click.echo(writer.render(records, columns), nl=False)

    def display_error(self, error_message: str) -> None:
        click.echo(click.style(f"Error: {error_message}", fg='red'), err=True)

    def display_success(self, message: str) -> None:
        click.echo(click.style(message, fg='green'), err=True)


cli_app = BatemanHornCLI()


class IntegerValue(click.ParamType):
    """Exact integers, also written as 1e7 or 10^7."""

    name = "integer"

    def convert(self, value, param, ctx):
        try:
            return ArgumentValidator.parse_integer(value)
        except ParseError as e:
            self.fail(e.message, param, ctx)


INTEGER = IntegerValue()
FORMAT_CHOICE = click.Choice([f.value for f in OutputFormat])


class ExitCodeGroup(click.Group):
    """Click group that reports every failure through the toolkit's exit codes."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            result = super().main(args=args, prog_name=prog_name, complete_var=complete_var,
                                  standalone_mode=False, **extra)
            code = result if isinstance(result, int) else 0
        except click.ClickException as e:
            e.show()
            code = 1
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = 1
        except Exception as e:
            code = cli_app.error_handler.handle_error(e, "cli")
            classified = cli_app.error_handler.classify_exception(e)
            cli_app.display_error(classified.message)
        if standalone_mode:
            sys.exit(code)
        return code


def _app(ctx: click.Context) -> BatemanHornApp:
    return ctx.obj['app']


def _format(ctx: click.Context, output_format: Optional[str]) -> str:
    return output_format or _app(ctx).config.output_format


def _run_config(ctx: click.Context, subcommand: str, **fields) -> RunConfig:
    """Record the validated invocation before any computation starts."""
    app = _app(ctx)
    output_format = OutputFormat(_format(ctx, fields.pop('output_format', None)))
    run = RunConfig(subcommand=subcommand, output_format=output_format, seed=app.config.seed,
                    **fields)
    ctx.obj['run'] = run
    cli_app.logger.debug(f"Run configuration: {run.to_dict()}")
    return run


def _exactly_one(**flags) -> str:
    chosen = [name for name, on in flags.items() if on]
    if len(chosen) != 1:
        names = ', '.join('--' + n.replace('_', '-') for n in flags)
        given = ', '.join('--' + n.replace('_', '-') for n in chosen) or 'none'
        raise ValidationError(f"choose exactly one of {names} (got {given})")
    return chosen[0]


@click.group(cls=ExitCodeGroup, invoke_without_command=True)
@click.option('--config', '-c',
              type=click.Path(exists=True, path_type=Path),
              help='Path to a JSON or YAML configuration file')
@click.option('--log-level',
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']),
              default='WARNING',
              help='Set logging level (logs go to stderr)')
@click.option('--log-file',
              type=click.Path(path_type=Path),
              help='Path to a JSON-lines log file')
@click.option('--threads', type=click.IntRange(1, 64), help='Worker threads for sieving')
@click.option('--seed', type=int, help='Seed for probabilistic primality tests')
@click.option('--allow-large', is_flag=True, default=None, help='Lift the desk-scale caps')
@click.option('--progress/--no-progress', default=None, help='Show progress bars on stderr')
@click.option('--memory-budget', type=INTEGER, help='Memory budget in bytes')
@click.option('--segment-bytes', type=INTEGER, help='Sieve segment size in bytes')
@click.option('--rounds', type=click.IntRange(1), help='Miller-Rabin rounds beyond 2^64')
@click.option('--brute-cutoff', type=INTEGER, help='Largest prime for brute-force root counts')
@click.option('--max-skip', type=click.IntRange(0), help='Leading ray values that may be skipped')
@click.option('--golden-dir', type=click.Path(path_type=Path), help='Directory of golden CSV tables')
@click.pass_context
def main(ctx, config, log_level, log_file, **engine_options):
    """
    Bateman-Horn toolkit - prime values of polynomials, constants and counts.

    \b
    EXAMPLES:

    Landau constant and the divergence verdict:
        bateman-horn constant -f "t^2+1" --bound 1e7

    Twin prime constant in closed form:
        bateman-horn constant --form ck -k 2

    Count n <= 10^6 with n^2+1 prime, beside the prediction:
        bateman-horn count -f "t^2+1" -x 1e6 --predict

    Regenerate a reference table and diff it against golden values:
        bateman-horn tables --id ck --through 150 --diff

    Ulam spiral raster and a diagonal ray:
        bateman-horn ulam --side 251 --out spiral.pgm
        bateman-horn ulam --ray 7 --dir SE --report

    Prime-rich t^2+t+k from the Chinese remainder theorem:
        bateman-horn euler --primes-through 37
    """
    ctx.ensure_object(dict)

    setup_logging(log_level=log_level, log_file=str(log_file) if log_file else None)

    cli_args = {k: (str(v) if isinstance(v, Path) else v)
                for k, v in engine_options.items() if v is not None}
    app = BatemanHornApp(config_manager=cli_app.config_manager)
    app.load_configuration(str(config) if config else None, cli_args)
    ctx.obj['app'] = app
    cli_app.app = app
    ctx.call_on_close(app.shutdown)

    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


@main.command()
@click.option('--family', '-f', 'family', multiple=True,
              help='Polynomial family, e.g. "t, t+2" (repeatable)')
@click.option('--form', type=click.Choice(CONSTANT_FORMS), default='bh',
              help='General product (bh) or a closed form')
@click.option('--bound', type=INTEGER, default=10**6, show_default=True, help='Prime bound B')
@click.option('-k', 'k', type=INTEGER, help='Shift for ck, length for greentao')
@click.option('--difference', type=INTEGER, help='Common difference for greentao (default primorial)')
@click.option('--checkpoints', help='Comma-separated checkpoint bounds, e.g. 1e3,1e4,1e5')
@click.option('--override', is_flag=True, help='Proceed with an inadmissible family')
@click.option('--format', 'output_format', type=FORMAT_CHOICE)
@click.pass_context
def constant(ctx, family, form, bound, k, difference, checkpoints, override, output_format):
    """
    Evaluate a Bateman-Horn constant.

    \b
    EXAMPLES:
        bateman-horn constant -f "t^2+1" --bound 1e7
        bateman-horn constant -f "t, t+2, t+6" --checkpoints 1e3,1e4,1e5,1e6
        bateman-horn constant --form ck -k 30
        bateman-horn constant --form hlf -f "t^2+t+41"
        bateman-horn constant --form ap -f "4*t+1"
        bateman-horn constant --form greentao -k 3 --difference 6
    """
    schedule = ArgumentValidator.parse_integer_list(checkpoints) if checkpoints else None
    run = _run_config(ctx, 'constant', family=list(family), prime_bound=bound,
                      checkpoints=schedule or [], override=override, output_format=output_format,
                      options={'form': form, 'k': k, 'difference': difference})

    estimate = _app(ctx).constant(form, ', '.join(family) or None, bound, schedule, override, k, difference)

    fmt = run.output_format.value
    if fmt == OutputFormat.JSON.value or not isinstance(estimate, ConstantEstimate):
        cli_app.display_records([estimate.to_dict()], output_format=fmt)
        return
    summary = {
        'family': estimate.family,
        'bound': estimate.prime_bound,
        'value': estimate.value,
        'verdict': estimate.divergence_verdict.value if estimate.divergence_verdict else None,
    }
    columns = ['family', 'bound', 'value', 'verdict']
    if estimate.tail_bound is not None:
        summary['tail_bound'] = estimate.tail_bound
        columns.append('tail_bound')
    if estimate.exact is not None:
        summary['exact'] = estimate.exact
        columns.append('exact')
    cli_app.display_records([summary], columns, fmt)
    if estimate.checkpoints and len(estimate.checkpoints) > 1:
        series = dict(estimate.series_checkpoints)
        rows = [{'checkpoint': b, 'partial': v, 'series': series.get(b)} for b, v in estimate.checkpoints]
        click.echo()
        cli_app.display_records(rows, ['checkpoint', 'partial', 'series'], fmt)


@main.command()
@click.option('--family', '-f', 'family', multiple=True, help='Polynomial family (repeatable)')
@click.option('-x', 'xs', type=INTEGER, multiple=True, help='Count bound (repeatable)')
@click.option('--predict', is_flag=True, help='Add the predicted count and ratio')
@click.option('--bound', type=INTEGER,
              help='Prime bound of the predicting constant, or search bound for --chains and --values')
@click.option('--pairs', is_flag=True, help='Count primes p with p+k prime')
@click.option('-k', 'shift', type=INTEGER, help='Pair shift k')
@click.option('--first-primes', type=INTEGER, help='Count pairs among the first N primes')
@click.option('--chains', type=click.Choice(['first', 'second']), help='List Cunningham chains')
@click.option('--min-len', type=click.IntRange(1), default=2, show_default=True)
@click.option('--ap', 'progression', help='Progression a,b: primes p = b mod a')
@click.option('--ap-series', type=INTEGER, help='All residue classes modulo a')
@click.option('--values', 'list_values', is_flag=True, help='List arguments instead of counting')
@click.option('--landau', is_flag=True, help='Primes n^2+1 <= x')
@click.option('--sophie', is_flag=True, help='Sophie Germain primes p <= x')
@click.option('--brun', is_flag=True, help="Partial sums of Brun's series")
@click.option('--illiac', is_flag=True, help='Primes p <= x with p^2+p+1 prime')
@click.option('--reciprocal', is_flag=True, help='Partial sums of 1/p')
@click.option('--mertens', is_flag=True, help='Sum of 1/p minus log log x')
@click.option('--override', is_flag=True, help='Proceed with an inadmissible family')
@click.option('--timings', is_flag=True, help='Add a wall-clock seconds column')
@click.option('--format', 'output_format', type=FORMAT_CHOICE)
@click.pass_context
def count(ctx, family, xs, predict, bound, pairs, shift, first_primes, chains, min_len, progression,
          ap_series, list_values, landau, sophie, brun, illiac, reciprocal, mertens, override,
          timings, output_format):
    """
    Count prime values against the predicted asymptotic.

    \b
    EXAMPLES:
        bateman-horn count -f "t^2+1" -x 1e6 --predict
        bateman-horn count --pairs -k 2 --first-primes 1e4
        bateman-horn count --chains first --bound 100 --min-len 5
        bateman-horn count --ap 4,1 -x 1e6
        bateman-horn count --ap 10000000,123456789 --values --bound 100
        bateman-horn count --illiac -x 112999
    """
    mode = _exactly_one(family=bool(family), pairs=pairs, chains=chains is not None,
                        ap=progression is not None, ap_series=ap_series is not None,
                        landau=landau, sophie=sophie, brun=brun, illiac=illiac,
                        reciprocal=reciprocal, mertens=mertens)
    run = _run_config(ctx, 'count', family=list(family), x=xs[-1] if xs else None,
                      prime_bound=bound, count_n=first_primes, override=override,
                      output_format=output_format, options={'mode': mode, 'timings': timings})
    app = _app(ctx)
    fmt = run.output_format.value

    def need_x() -> List[int]:
        if not xs:
            raise ValidationError(f"--{mode.replace('_', '-')} needs -x")
        return list(xs)

    def show(reports) -> None:
        cli_app.display_records([r.to_dict(include_timing=timings) for r in reports], output_format=fmt)

    if mode == 'family':
        text = ', '.join(family)
        if list_values:
            limit = xs[-1] if xs else bound
            if limit is None:
                raise ValidationError("--values needs -x or --bound")
            cli_app.display_records([{'n': n} for n in app.arguments(text, limit, override)],
                                    output_format=fmt)
            return
        show([app.count_family(text, x, predict, bound or 10**6, override) for x in need_x()])
    elif mode == 'pairs':
        if shift is None:
            raise ValidationError("--pairs needs -k")
        if first_primes is not None:
            if xs:
                raise ValidationError("give -x or --first-primes, not both")
            show([app.count_pairs(shift, first_primes=first_primes)])
        else:
            show([app.count_pairs(shift, x=x, predict=predict, prime_bound=bound or 10**6)
                  for x in need_x()])
    elif mode == 'chains':
        if bound is None:
            raise ValidationError("--chains needs --bound")
        found = app.chains(chains, bound, min_len)
        cli_app.display_records([c.to_dict() for c in found],
                                ['kind', 'length', 'elements', 'complete'], fmt)
    elif mode == 'ap':
        values = ArgumentValidator.parse_integer_list(progression)
        if len(values) != 2:
            raise ParseError(f"--ap takes a,b, got '{progression}'")
        a, b = values
        if list_values:
            if bound is None:
                raise ValidationError("--ap --values needs --bound")
            cli_app.display_records([{'t': t} for t in app.ap_values(a, b, bound)], output_format=fmt)
            return
        show([app.count_ap(a, b, x) for x in need_x()])
    elif mode == 'ap_series':
        show(app.count_ap_series(ap_series, need_x()[-1]))
    elif mode == 'landau':
        show([app.count_landau(x) for x in need_x()])
    elif mode == 'sophie':
        show([app.count_sophie(x) for x in need_x()])
    elif mode == 'brun':
        cli_app.display_records([{'x': b, 'brun': v} for b, v in app.brun(need_x())], output_format=fmt)
    elif mode == 'illiac':
        show(app.illiac(list(xs) or [112999], bound or 10**6))
    elif mode == 'reciprocal':
        rows = [{'x': b, 'sum': v, 'loglog': math.log(math.log(b)), 'deviation': v - math.log(math.log(b))}
                for b, v in app.reciprocal_sums(need_x())]
        cli_app.display_records(rows, output_format=fmt)
    else:
        rows = [{'x': x, 'deviation': app.mertens(x), 'mertens_constant': MEISSEL_MERTENS} for x in need_x()]
        cli_app.display_records(rows, output_format=fmt)


@main.command()
@click.option('--id', 'table_id', type=click.Choice(TABLE_IDS), required=True, help='Table to regenerate')
@click.option('--max', 'max_value', type=INTEGER, help='Largest x (loglint, disagree) or prime index (divergezero)')
@click.option('--through', type=INTEGER, help='Largest shift k (ck)')
@click.option('--max-n', type=INTEGER, help='Largest exponent n (pis)')
@click.option('--diff', is_flag=True, help='Compare with golden values; exit 1 on mismatch')
@click.option('--out', type=click.Path(path_type=Path), help='Write the table as CSV to this file')
@click.option('--format', 'output_format', type=FORMAT_CHOICE)
@click.pass_context
def tables(ctx, table_id, max_value, through, max_n, diff, out, output_format):
    """
    Regenerate a reference table.

    \b
    EXAMPLES:
        bateman-horn tables --id ck --through 150
        bateman-horn tables --id loglint --max 1e6 --diff
        bateman-horn tables --id pis --max-n 4 --out pis.csv
    """
    limits = [v for v in (max_value, through, max_n) if v is not None]
    if len(limits) > 1:
        raise ValidationError("give at most one of --max, --through, --max-n")
    run = _run_config(ctx, 'tables', x=limits[0] if limits else None, output_format=output_format,
                      options={'table': table_id, 'diff': diff})
    app = _app(ctx)

    table, mismatches = app.tables(table_id, limits[0] if limits else None, diff)
    if out:
        app.guard.validate_output_path(str(out))
        write_report(out, CsvWriter().render(table.to_records(), table.columns))
        cli_app.display_success(f"Wrote {len(table.rows)} rows to {out}")
    else:
        cli_app.display_records(table.to_records(), table.columns, run.output_format.value)

    if mismatches:
        for m in mismatches:
            cli_app.display_error(f"{m.table_id} {m.key} {m.column}: expected {m.expected}, got {m.actual}")
        raise GoldenMismatchError(f"{len(mismatches)} cells of table {table_id} differ from golden values",
                                  details={'mismatches': [m.to_dict() for m in mismatches]})
    if diff:
        cli_app.display_success(f"Table {table_id} matches the golden values")


@main.command()
@click.option('--side', type=INTEGER, help='Odd side length of the raster')
@click.option('--out', type=click.Path(path_type=Path), help='PGM output path')
@click.option('--ray', 'ray_value', type=INTEGER, help='Start the ray at the cell holding this value')
@click.option('--anchor', help='Start the ray at lattice point x,y')
@click.option('--dir', 'direction', help='Ray direction: E NE N NW W SW S SE')
@click.option('--report', is_flag=True, help='Print the ray report')
@click.option('--count', 'ray_count', type=INTEGER, default=1000, show_default=True,
              help='Ray values examined for primes')
@click.option('--constant-bound', type=INTEGER, default=10**6, show_default=True)
@click.option('--overlay', is_flag=True, help='Draw the ray on the raster')
@click.option('--report-out', type=click.Path(path_type=Path), help='Write the ray report as CSV')
@click.option('--format', 'output_format', type=FORMAT_CHOICE)
@click.pass_context
def ulam(ctx, side, out, ray_value, anchor, direction, report, ray_count, constant_bound, overlay,
         report_out, output_format):
    """
    Ulam spiral rasters and ray quadratics.

    \b
    EXAMPLES:
        bateman-horn ulam --side 251 --out spiral.pgm
        bateman-horn ulam --ray 7 --dir SE --report
        bateman-horn ulam --anchor 0,-1 --dir E --report
        bateman-horn ulam --side 101 --out rays.pgm --ray 5 --dir NE --overlay
    """
    if side is not None and not ArgumentValidator.validate_side(side):
        raise ParseError(f"--side must be a positive odd number, got {side}")
    if side is not None and out is None:
        raise ValidationError("--side needs --out for the PGM raster")
    has_ray = ray_value is not None or anchor is not None
    if side is None and not has_ray:
        raise ValidationError("give --side or a ray (--ray or --anchor)")
    if has_ray and not direction:
        raise ValidationError("a ray needs --dir")
    if overlay and not (has_ray and side is not None):
        raise ValidationError("--overlay needs both --side and a ray")
    point = ArgumentValidator.parse_point(anchor) if anchor is not None else None
    run = _run_config(ctx, 'ulam', output_format=output_format,
                      options={'side': side, 'ray': ray_value, 'anchor': anchor, 'dir': direction})
    app = _app(ctx)

    ray = None
    if has_ray:
        ray = app.ulam_ray(direction, ray_value, point, ray_count, constant_bound)
        if report or side is None:
            cli_app.display_records([ray.to_dict()], output_format=run.output_format.value)
        if report_out:
            app.guard.validate_output_path(str(report_out))
            write_report(report_out, CsvWriter().render([ray.to_dict()]))
    if side is not None:
        app.ulam_raster(side, str(out), [ray.ray] if overlay else ())
        cli_app.display_success(f"Wrote {side}x{side} spiral to {out}")


@main.command()
@click.option('--primes-through', type=INTEGER, help='Plan over the odd primes up to this bound')
@click.option('--first-odd-primes', type=INTEGER, help='Plan over the odd primes among the first N primes')
@click.option('--rule', type=click.Choice(RULES), default='least-primitive-root', show_default=True)
@click.option('--nonresidues', help='Explicit nonresidues p:r,p:r (with --rule explicit)')
@click.option('--representative', type=click.Choice(REPRESENTATIVES), default='least-positive',
              show_default=True)
@click.option('--streak', type=INTEGER, help='Length of the prime run of t^2+t+K from t = 0')
@click.option('--plan-streak', is_flag=True, help='Also report the prime run of the plan polynomial')
@click.option('--constant-bound', type=INTEGER, help='Evaluate the plan constant up to this prime bound')
@click.option('--format', 'output_format', type=FORMAT_CHOICE)
@click.pass_context
def euler(ctx, primes_through, first_odd_primes, rule, nonresidues, representative, streak,
          plan_streak, constant_bound, output_format):
    """
    Build t^2+t+k with prescribed nonresidue discriminants.

    \b
    EXAMPLES:
        bateman-horn euler --primes-through 37
        bateman-horn euler --first-odd-primes 100 --constant-bound 1e7
        bateman-horn euler --streak 41
    """
    explicit = ArgumentValidator.parse_nonresidues(nonresidues) if nonresidues else None
    if explicit and rule != 'explicit':
        raise ValidationError("--nonresidues needs --rule explicit")
    has_plan = primes_through is not None or first_odd_primes is not None
    if not has_plan and streak is None:
        raise ValidationError("give --primes-through, --first-odd-primes or --streak")
    run = _run_config(ctx, 'euler', prime_bound=constant_bound, count_n=first_odd_primes,
                      output_format=output_format,
                      options={'primes_through': primes_through, 'rule': rule, 'streak': streak})
    app = _app(ctx)
    fmt = run.output_format.value

    if streak is not None:
        cli_app.display_records([{'k': streak, 'streak': app.euler_streak(streak)}], output_format=fmt)
    if not has_plan:
        return

    plan = app.euler_plan(primes_through, first_odd_primes, rule, explicit, representative)
    record = plan.to_dict()
    if fmt != OutputFormat.JSON.value:
        record = {'rule': plan.rule, 'primes': len(plan.primes), 'largest_prime': plan.primes[-1],
                  'digits': record['digits'], 'k': record['k']}
    if plan_streak:
        record['streak'] = app.euler_streak(plan.k) if plan.k > 0 else 0
    if constant_bound is not None:
        estimate = app.euler_constant(plan, constant_bound)
        record['constant'] = estimate.value
        record['constant_bound'] = constant_bound
    cli_app.display_records([record], output_format=fmt)


@main.command()
@click.option('--family', '-f', 'family', multiple=True, required=True, help='Polynomial family')
@click.option('--profile', type=INTEGER, help='Also list root counts for primes up to this bound')
@click.option('--format', 'output_format', type=FORMAT_CHOICE)
@click.pass_context
def check(ctx, family, profile, output_format):
    """
    Report the admissibility hypotheses of a family.

    Exits with 2 when the family is not admissible.
    """
    run = _run_config(ctx, 'check', family=list(family), output_format=output_format,
                      options={'profile': profile})
    fmt = run.output_format.value
    report, omega_profile = _app(ctx).check(', '.join(family), profile or 0)

    cli_app.display_records([m.to_dict() for m in report.members], output_format=fmt)
    click.echo()
    summary = {'admissible': report.admissible, 'fixed_divisor': report.fixed_divisor,
               'vanishing_primes': report.vanishing_primes,
               'reasons': '; '.join(report.failing_hypotheses())}
    cli_app.display_records([summary], output_format=fmt)
    if omega_profile is not None:
        click.echo()
        rows = [{'p': p, 'omega': w, 'method': omega_profile.methods[p].value}
                for p, w in sorted(omega_profile.table.items())]
        cli_app.display_records(rows, output_format=fmt)
    if not report.admissible:
        ctx.exit(2)


@main.command()
@click.option('--pi', 'pi_x', type=INTEGER, help='Number of primes <= X')
@click.option('--nth', type=INTEGER, help='The N-th prime')
@click.option('--is-prime', 'candidate', type=INTEGER, help='Primality of N')
@click.option('--format', 'output_format', type=FORMAT_CHOICE)
@click.pass_context
def primes(ctx, pi_x, nth, candidate, output_format):
    """Prime counting, the n-th prime and primality tests."""
    _exactly_one(pi=pi_x is not None, nth=nth is not None, is_prime=candidate is not None)
    run = _run_config(ctx, 'primes', x=pi_x, count_n=nth, output_format=output_format)
    app = _app(ctx)
    if pi_x is not None:
        record = {'x': pi_x, 'pi': app.prime_pi(pi_x)}
    elif nth is not None:
        record = {'n': nth, 'prime': app.nth_prime(nth)}
    else:
        record = {'n': candidate, 'prime': app.is_prime(candidate)}
    cli_app.display_records([record], output_format=run.output_format.value)


@main.command()
@click.option('--output', '-o',
              type=click.Path(path_type=Path),
              default='./bateman_horn_config.json',
              show_default=True,
              help='Output path for configuration file (.json, .yaml or .yml)')
def init_config(output):
    """Generate a default configuration file."""
    cli_app.config_manager.save_default_config(output)
    cli_app.display_success(f"Default configuration saved to: {output}")


@main.command()
@click.option('--config', '-c',
              type=click.Path(exists=True, path_type=Path),
              help='Path to configuration file to validate')
def validate_config(config):
    """Validate a configuration file and print the effective settings."""
    if not config:
        config = cli_app.config_manager.get_config_path()
    loaded = cli_app.config_manager.load_config(config)
    cli_app.config_manager.validate_config(loaded)
    cli_app.display_success(f"Configuration file is valid: {config}")
    settings = loaded.to_dict()
    cli_app.display_records([{'setting': k, 'value': settings[k]} for k in sorted(settings)],
                            ['setting', 'value'])


if __name__ == '__main__':
    main()
