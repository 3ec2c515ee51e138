"""Command-line interface for pkpres."""

import click
import contextlib
import dataclasses
import tomllib
import logging
import click_log

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Any, Iterable, Iterator, List, Optional, TextIO, Tuple
from pkpres import (
    __version__, ConfigurationError, CoordinateOverflowError, DimensionMismatchError,
    InvalidTupleError, InvalidWordError, NotAnAtomError, ParseError, VerificationError
)
from pkpres.core import PkTuple, decompose, parse_atom, parse_tuple, relation_for
from pkpres.rewrite import evaluate, normalize, parse_word, words_equivalent
from pkpres.p2 import P2TableRow, check_p2_relation, p2_table, parse_letter
from pkpres.verify import (
    DEFAULT_GUARD, CheckReport, FiberReport, SweepSummary, sweep_fibers,
    verify_atoms_minimal, verify_decompositions, verify_relations
)

logger = logging.getLogger('pkpres')
click_log.basic_config(logger)

# Exit statuses; click keeps 2 for its own usage errors
EXIT_VERIFICATION_FAILED = 1
EXIT_GUARD_EXCEEDED = 3
EXIT_INPUT_ERROR = 4

# Keys accepted in the [verify] table of a config file, mapped to RunConfig fields
CONFIG_KEYS: Dict[str, str] = {
    'k': 'dimension',
    'max_entry': 'max_entry',
    'max_target': 'max_target',
    'guard': 'guard',
    'jobs': 'jobs',
    'machine': 'machine',
}


class InputFailure(click.ClickException):
    """Malformed tuple, word, atom or config input."""
    exit_code = EXIT_INPUT_ERROR


class VerificationFailure(click.ClickException):
    exit_code = EXIT_VERIFICATION_FAILED


class GuardExceeded(click.ClickException):
    exit_code = EXIT_GUARD_EXCEEDED


@contextlib.contextmanager
def input_errors() -> Iterator[None]:
    """Turn library input errors into an InputFailure."""
    try:
        yield
    except (ParseError, DimensionMismatchError, NotAnAtomError, InvalidTupleError,
            InvalidWordError, CoordinateOverflowError, ConfigurationError) as e:
        raise InputFailure(str(e))


@dataclass(frozen=True)
class RunConfig:
    """Bounds and output mode of a verification run."""
    dimension: int = 2
    max_entry: int = 5
    max_target: int = 5
    guard: int = DEFAULT_GUARD
    jobs: int = 1
    machine: bool = False

    def validate(self) -> None:
        """Raise ConfigurationError on a non-positive bound or guard."""
        for name in ('dimension', 'max_entry', 'max_target', 'guard', 'jobs'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigurationError(f'{name} must be an integer, got {value!r}')
            if value < 1:
                raise ConfigurationError(f'{name} must be at least 1, got {value}')
        if not isinstance(self.machine, bool):
            raise ConfigurationError(f'machine must be true or false, got {self.machine!r}')

    def with_overrides(self, **overrides: Any) -> 'RunConfig':
        """Return a copy with every override that is not None applied."""
        changes = {name: value for name, value in overrides.items() if value is not None}
        return dataclasses.replace(self, **changes)


def validate_config_file(cfgpath: Path) -> Tuple[bool, str]:
    """Validate a TOML configuration file.

    Args:
        cfgpath: Path to the configuration file.

    Returns:
        A tuple of (is_valid, error_message). If valid, error_message is empty.
    """
    if not cfgpath.exists():
        return False, f"Configuration file not found: {cfgpath}"

    try:
        with open(cfgpath, 'rb') as cf:
            config = tomllib.load(cf)
        run_config_from(config).validate()
        return True, ""
    except tomllib.TOMLDecodeError as e:
        return False, f"TOML syntax error: {e}"
    except ConfigurationError as e:
        return False, f"Invalid configuration: {e}"
    except Exception as e:
        return False, f"Error reading config: {e}"


def load_config(cfgfile: Path) -> Dict[str, Any]:
    """Load and parse the TOML configuration file."""
    if not cfgfile.exists():
        raise ConfigurationError(f'Config file not found: {cfgfile}')

    logger.debug('Loading config from %s', str(cfgfile))
    try:
        with open(cfgfile, 'rb') as cf:
            config = tomllib.load(cf)
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise ConfigurationError(f'Error loading config {cfgfile}: {e}') from e

    logger.debug('Config loaded with sections: %s', ', '.join(config.keys()) or 'none')
    return config


def run_config_from(config: Dict[str, Any]) -> RunConfig:
    """Build a RunConfig from the [verify] table of a parsed config file.

    Unknown keys are logged and ignored.
    """
    section = config.get('verify', {})
    if not isinstance(section, dict):
        raise ConfigurationError('[verify] must be a table')
    values: Dict[str, Any] = {}
    for key, value in section.items():
        name = CONFIG_KEYS.get(key)
        if name is None:
            logger.warning('Ignoring unknown key "%s" in [verify]', key)
            continue
        values[name] = value
    run_config = RunConfig(**values)
    run_config.validate()
    return run_config


def emit_record(report: FiberReport, to_stdout: bool, out_handle: Optional[TextIO]) -> None:
    line = report.to_json()
    if to_stdout:
        click.echo(line)
    if out_handle is not None:
        out_handle.write(line + '\n')
        out_handle.flush()


def describe_check(report: CheckReport) -> str:
    status = 'ok' if report.passed else f'{len(report.failures)} failure(s)'
    line = f'{report.name}: K={report.dimension} B={report.bound}, {report.checked} checked, {status}'
    if report.name == 'atoms':
        line += f', {len(report.atoms)} atoms'
    return line


def describe_fiber(report: FiberReport) -> str:
    if report.guard_tripped:
        return f'{report.target.render()}: {report.error}'
    sizes = ', '.join(str(size) for size in report.component_sizes)
    line = f'{report.target.render()}: {report.fiber_size} words in {report.component_count} component(s) [{sizes}]'
    if report.stray_edges:
        line += f', {report.stray_edges} rewrite(s) leave the fiber'
    if not report.normal_form_ok:
        line += ', normal form not reached'
    return line


@click.group()
@click.version_option(version=__version__)
@click_log.simple_verbosity_option(logger)
@click.option('--cfgfile', '-c', help='Path to configuration file.')
@click.option('-l', '--logfile', default=None, type=click.Path(), help='Path to log file.')
@click.pass_context
def main(ctx: click.Context, cfgfile: Optional[str], logfile: Optional[click.Path]) -> None:
    ctx.ensure_object(dict)

    if logfile:
        file_handler = logging.FileHandler(str(logfile))
        file_handler.setLevel(logging.INFO)
        formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    run_config = RunConfig()
    if cfgfile:
        try:
            run_config = run_config_from(load_config(Path(cfgfile)))
        except ConfigurationError as e:
            logger.critical('Cannot use config file %s', cfgfile)
            raise InputFailure(str(e))
    ctx.obj['run_config'] = run_config


@main.command('normalize')
@click.argument('word_text')
@click.option('--expand', '-e', is_flag=True, help='also print the word the normal form denotes')
def cmd_normalize(word_text: str, expand: bool) -> None:
    """Reduce WORD to its normal form 1^m . (head).

    WORD is a sequence of atoms joined by dots, e.g. "(2,1).(1,3)".
    """
    with input_errors():
        word = parse_word(word_text)
        nf = normalize(word)
        value = evaluate(word)
    logger.debug('Normalized %d letters of dimension %d', len(word), word.dimension)
    click.echo(nf.render())
    click.echo(f'value: {value.render()}')
    if expand:
        click.echo(f'word: {nf.expand().render()}')


@main.command('decompose')
@click.argument('tuple_text')
def cmd_decompose(tuple_text: str) -> None:
    """Split TUPLE as m*1 + b with b an atom."""
    with input_errors():
        t = parse_tuple(tuple_text)
    m, b = decompose(t)
    click.echo(f'{t.render()} = {m}*{PkTuple.bone(t.dimension).render()} + {b.render()}')


@main.command('relation')
@click.argument('a_text')
@click.argument('b_text')
def cmd_relations(a_text: str, b_text: str) -> None:
    """Print the relation with left side x_A x_B.

    Both A and B must be atoms of the same dimension.
    """
    with input_errors():
        relation = relation_for(parse_atom(a_text), parse_atom(b_text))
    click.echo(relation.render())


@main.command('equivalent')
@click.argument('u_text')
@click.argument('v_text')
def cmd_equivalent(u_text: str, v_text: str) -> None:
    """Tell whether words U and V are equal in P^K."""
    with input_errors():
        u = parse_word(u_text)
        v = parse_word(v_text)
        same = words_equivalent(u, v)
    click.echo(f'{u.render()} -> {normalize(u).render()}')
    click.echo(f'{v.render()} -> {normalize(v).render()}')
    click.echo('equivalent' if same else 'not equivalent')


@main.command('p2-table')
@click.option('--bound', '-b', default=4, show_default=True, type=click.IntRange(min=1),
              help='largest subscript of y and z')
@click.option('--pair', '-p', nargs=2, default=None, metavar='P Q',
              help='print only the row for letters P and Q, e.g. --pair y_2 z_3')
def cmd_p2_table(bound: int, pair: Optional[Tuple[str, str]]) -> None:
    """Print the P^2 relations for letters x, y_a, z_a with a <= BOUND.

    Every row is checked against the general relation schema as it is printed.
    """
    rows: Iterable[P2TableRow]
    try:
        if pair:
            with input_errors():
                rows = [check_p2_relation(parse_letter(pair[0]), parse_letter(pair[1]))]
        else:
            rows = p2_table(bound)
        for row in rows:
            click.echo(f'{row.render():<24} {row.relation.render()}')
    except VerificationError as e:
        logger.critical('P^2 table disagrees with the relation schema')
        raise VerificationFailure(str(e))


@main.command('check-config')
@click.argument('cfgpath', type=click.Path(dir_okay=False, path_type=Path))
def cmd_check_config(cfgpath: Path) -> None:
    """Check that CFGPATH is a usable configuration file."""
    ok, message = validate_config_file(cfgpath)
    if not ok:
        raise InputFailure(message)
    click.echo(f'{cfgpath}: ok')


@main.command('verify')
@click.pass_context
@click.option('--k', 'dimension', default=None, type=click.IntRange(min=1), help='dimension K (default: 2)')
@click.option('--max-entry', default=None, type=click.IntRange(min=1),
              help='box bound for the atom, decomposition and relation sweeps (default: 5)')
@click.option('--max-target', default=None, type=click.IntRange(min=1),
              help='box bound for the fiber sweep (default: 5)')
@click.option('--guard', default=None, type=click.IntRange(min=1),
              help=f'largest fiber to enumerate (default: {DEFAULT_GUARD})')
@click.option('--jobs', '-j', default=None, type=click.IntRange(min=1), help='worker processes (default: 1)')
@click.option('--machine', is_flag=True, help='print one JSON record per fiber')
@click.option('--out', '-o', default=None, type=click.Path(dir_okay=False, path_type=Path),
              help='also write fiber records to this file')
def cmd_verify(ctx: click.Context, dimension: Optional[int], max_entry: Optional[int],
               max_target: Optional[int], guard: Optional[int], jobs: Optional[int],
               machine: bool, out: Optional[Path]) -> None:
    """Run the atom, decomposition and relation sweeps, then check every fiber.

    Exits 0 when everything passes, 1 on a verification failure and 3 when
    some fiber was skipped for exceeding the guard.
    """
    run_config: RunConfig = ctx.obj['run_config'].with_overrides(
        dimension=dimension, max_entry=max_entry, max_target=max_target,
        guard=guard, jobs=jobs, machine=machine or None,
    )
    with input_errors():
        run_config.validate()
    logger.debug('Running with %s', run_config)

    checks = [
        verify_atoms_minimal(run_config.dimension, run_config.max_entry),
        verify_decompositions(run_config.dimension, run_config.max_entry),
        verify_relations(run_config.dimension, run_config.max_entry),
    ]
    for check in checks:
        for failure in check.failures:
            logger.error('%s: %s', check.name, failure)
        if run_config.machine:
            logger.info('%s', describe_check(check))
        else:
            click.echo(describe_check(check))

    summary = SweepSummary()
    problems: List[FiberReport] = []
    with contextlib.ExitStack() as stack:
        out_handle = stack.enter_context(out.open('w')) if out is not None else None
        for report in sweep_fibers(run_config.dimension, run_config.max_target,
                                   run_config.guard, run_config.jobs):
            summary.add(report)
            emit_record(report, run_config.machine, out_handle)
            if not run_config.machine:
                click.echo(describe_fiber(report))
            if not report.passed:
                problems.append(report)

    for report in problems:
        logger.error('%s', describe_fiber(report))
    line = (f'fibers: {summary.checked} checked, {summary.passed} passed, {summary.failed} failed, '
            f'{summary.guard_errors} over guard, largest {summary.largest_fiber}')
    if run_config.machine:
        logger.info('%s', line)
    else:
        click.echo(line)

    failed_checks = [check.name for check in checks if not check.passed]
    if failed_checks or summary.failed:
        raise VerificationFailure(
            f'Verification failed: {len(failed_checks)} sweep(s), {summary.failed} fiber(s)'
        )
    if summary.guard_errors:
        raise GuardExceeded(f'{summary.guard_errors} fiber(s) exceeded the guard of {run_config.guard}')


if __name__ == '__main__':
    main()
