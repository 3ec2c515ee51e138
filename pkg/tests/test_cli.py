"""Tests for the pkp command-line interface."""

import logging
from pathlib import Path
from unittest.mock import patch

from click.testing import CliRunner

from pkpres import __version__
from pkpres.cli import EXIT_GUARD_EXCEEDED, EXIT_INPUT_ERROR, EXIT_VERIFICATION_FAILED, main
from pkpres.core import PkTuple
from pkpres.verify import FiberReport


class TestNormalizeCommand:
    """Tests for pkp normalize."""

    def test_normal_form(self, runner: CliRunner) -> None:
        """Prints 1^m . (head) and the value."""
        result = runner.invoke(main, ['normalize', '(2,1).(1,3)'])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == '1^2 . (1,2)'
        assert lines[1] == 'value: (3,4)'

    def test_single_letter(self, runner: CliRunner) -> None:
        """A one-letter word is already normal."""
        result = runner.invoke(main, ['normalize', '(1,1)'])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[0] == '1^0 . (1,1)'

    def test_expand(self, runner: CliRunner) -> None:
        """--expand prints the denoted word."""
        result = runner.invoke(main, ['normalize', '--expand', '(2,1).(1,3)'])
        assert result.exit_code == 0
        assert 'word: (1,1).(1,1).(1,2)' in result.stdout

    def test_parse_error(self, runner: CliRunner) -> None:
        """Unbalanced input is an input error with its position."""
        result = runner.invoke(main, ['normalize', '(2,1).(1,3'])
        assert result.exit_code == EXIT_INPUT_ERROR
        assert 'offset 11' in result.output

    def test_dimension_mismatch(self, runner: CliRunner) -> None:
        """Mixed dimensions are an input error."""
        result = runner.invoke(main, ['normalize', '(1,1).(1,1,1)'])
        assert result.exit_code == EXIT_INPUT_ERROR


class TestDecomposeCommand:
    """Tests for pkp decompose."""

    def test_decompose(self, runner: CliRunner) -> None:
        """Prints the m*1 + b split."""
        result = runner.invoke(main, ['decompose', '(4,4,6)'])
        assert result.exit_code == 0
        assert result.stdout.strip() == '(4,4,6) = 3*(1,1,1) + (1,1,3)'

    def test_bad_tuple(self, runner: CliRunner) -> None:
        """Zero coordinates do not parse."""
        result = runner.invoke(main, ['decompose', '(0,2)'])
        assert result.exit_code == EXIT_INPUT_ERROR

    def test_huge_coordinate(self, runner: CliRunner) -> None:
        """A coordinate with thousands of digits is an input error."""
        result = runner.invoke(main, ['decompose', '(' + '9' * 5000 + ',1)'])
        assert result.exit_code == EXIT_INPUT_ERROR
        assert 'exceeds' in result.output


class TestRelationCommand:
    """Tests for pkp relation."""

    def test_relation(self, runner: CliRunner) -> None:
        """Prints the relation equation."""
        result = runner.invoke(main, ['relation', '(2,1)', '(1,3)'])
        assert result.exit_code == 0
        assert result.stdout.strip() == 'x(2,1) x(1,3) = x(1,1)^2 x(1,2)'

    def test_bone_relation(self, runner: CliRunner) -> None:
        """x_1 x_b = x_1^1 x_b."""
        result = runner.invoke(main, ['relation', '(1,1)', '(1,3)'])
        assert result.stdout.strip() == 'x(1,1) x(1,3) = x(1,1)^1 x(1,3)'

    def test_not_an_atom(self, runner: CliRunner) -> None:
        """Non-atoms are rejected with the coordinate criterion."""
        result = runner.invoke(main, ['relation', '(2,2)', '(1,1)'])
        assert result.exit_code == EXIT_INPUT_ERROR
        assert '(2,2) is not an atom' in result.output
        assert 'some coordinate equal to 1' in result.output


class TestEquivalentCommand:
    """Tests for pkp equivalent."""

    def test_equivalent(self, runner: CliRunner) -> None:
        """Reordered letters are equivalent."""
        result = runner.invoke(main, ['equivalent', '(2,1).(1,3)', '(1,3).(2,1)'])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[-1] == 'equivalent'

    def test_not_equivalent(self, runner: CliRunner) -> None:
        """Different values are not equivalent."""
        result = runner.invoke(main, ['equivalent', '(1,1)', '(1,1).(1,1)'])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[-1] == 'not equivalent'


class TestP2TableCommand:
    """Tests for pkp p2-table."""

    def test_table(self, runner: CliRunner) -> None:
        """All 25 rows for bound 3, each with its general relation."""
        result = runner.invoke(main, ['p2-table', '--bound', '3'])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert len(lines) == 25
        row = next(line for line in lines if line.startswith('y_2 z_3 ='))
        assert 'x^2 z_2' in row
        assert 'x(2,1) x(1,3) = x(1,1)^2 x(1,2)' in row

    def test_pair(self, runner: CliRunner) -> None:
        """--pair prints the single row for two letters."""
        result = runner.invoke(main, ['p2-table', '--pair', 'y_3', 'z_3'])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert len(lines) == 1
        assert lines[0].startswith('y_3 z_3 = x^4')
        assert 'x(3,1) x(1,3) = x(1,1)^3 x(1,1)' in lines[0]

    def test_bad_pair(self, runner: CliRunner) -> None:
        """Unknown letters are input errors."""
        result = runner.invoke(main, ['p2-table', '--pair', 'y_1', 'z_3'])
        assert result.exit_code == EXIT_INPUT_ERROR
        result = runner.invoke(main, ['p2-table', '--pair', 'w_2', 'z_3'])
        assert result.exit_code == EXIT_INPUT_ERROR


class TestVerifyCommand:
    """Tests for pkp verify."""

    def test_default_box(self, runner: CliRunner) -> None:
        """K=2 up to 5 passes."""
        result = runner.invoke(main, ['verify', '--max-target', '5'])
        assert result.exit_code == 0
        assert 'fibers: 25 checked, 25 passed, 0 failed, 0 over guard' in result.stdout
        assert 'atoms: K=2 B=5, 25 checked, ok, 9 atoms' in result.stdout

    def test_dimension_one(self, runner: CliRunner) -> None:
        """K=1 up to 6 passes."""
        result = runner.invoke(main, ['verify', '--k', '1', '--max-target', '6'])
        assert result.exit_code == 0
        assert 'fibers: 6 checked, 6 passed' in result.stdout

    def test_guard(self, runner: CliRunner) -> None:
        """A guard of 1 skips fibers with several words and exits 3."""
        result = runner.invoke(main, ['verify', '--guard', '1'])
        assert result.exit_code == EXIT_GUARD_EXCEEDED
        assert 'exceeded the guard of 1' in result.output

    def test_guard_machine_records(self, runner: CliRunner) -> None:
        """Guard trips appear as records with an error and pass false."""
        result = runner.invoke(main, ['verify', '--guard', '1', '--max-target', '3', '--machine'])
        assert result.exit_code == EXIT_GUARD_EXCEEDED
        lines = result.stdout.splitlines()
        assert len(lines) == 9
        assert lines[6].startswith('{"target": "(3,1)"')
        assert '"pass": false' in lines[5]
        assert '"fiber_size": null' in lines[5]

    def test_machine_golden(self, runner: CliRunner, data_dir: Path) -> None:
        """Machine output for K=2 up to 4 matches the golden file."""
        result = runner.invoke(main, ['verify', '--k', '2', '--max-target', '4', '--machine'])
        assert result.exit_code == 0
        assert result.stdout == (data_dir / 'verify_k2_t4.jsonl').read_text()

    def test_jobs_golden(self, runner: CliRunner, data_dir: Path) -> None:
        """A process pool gives the same records."""
        result = runner.invoke(main, ['verify', '--max-target', '4', '--machine', '--jobs', '2'])
        assert result.exit_code == 0
        assert result.stdout == (data_dir / 'verify_k2_t4.jsonl').read_text()

    def test_out_file(self, runner: CliRunner, data_dir: Path, tmp_path: Path) -> None:
        """--out writes the records to a file in human mode too."""
        out = tmp_path / 'records.jsonl'
        result = runner.invoke(main, ['verify', '--max-target', '4', '--out', str(out)])
        assert result.exit_code == 0
        assert out.read_text() == (data_dir / 'verify_k2_t4.jsonl').read_text()
        assert '"target"' not in result.stdout

    def test_human_lines_per_target(self, runner: CliRunner) -> None:
        """Human mode prints one line per target, in target order."""
        result = runner.invoke(main, ['verify', '--max-target', '2'])
        assert result.exit_code == 0
        lines = [line for line in result.stdout.splitlines() if line.startswith('(')]
        assert lines == [
            '(1,1): 1 words in 1 component(s) [1]',
            '(1,2): 1 words in 1 component(s) [1]',
            '(2,1): 1 words in 1 component(s) [1]',
            '(2,2): 1 words in 1 component(s) [1]',
        ]

    def test_bad_bound(self, runner: CliRunner) -> None:
        """Non-positive bounds are usage errors."""
        result = runner.invoke(main, ['verify', '--max-target', '0'])
        assert result.exit_code == 2

    def test_failure_exit(self, runner: CliRunner) -> None:
        """A disconnected fiber exits 1, even alongside guard trips."""
        reports = [
            FiberReport(target=PkTuple((2, 2)), fiber_size=2, component_count=2, component_sizes=(1, 1)),
            FiberReport(target=PkTuple((3, 3)), error='over the guard'),
        ]
        with patch('pkpres.cli.sweep_fibers', return_value=iter(reports)):
            result = runner.invoke(main, ['verify', '--max-target', '1', '--machine'])
        assert result.exit_code == EXIT_VERIFICATION_FAILED
        assert '"component_count": 2' in result.stdout
        assert 'Verification failed' in result.output


class TestMainGroup:
    """Tests for the top-level group."""

    def test_version(self, runner: CliRunner) -> None:
        """--version reports the package version."""
        result = runner.invoke(main, ['--version'])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_logfile(self, runner: CliRunner, tmp_path: Path) -> None:
        """-l writes INFO records to a file."""
        logfile = tmp_path / 'pkp.log'
        try:
            result = runner.invoke(main, ['-l', str(logfile), 'verify', '--max-target', '2', '--machine'])
            assert result.exit_code == 0
            assert 'Checking 4 fibers' in logfile.read_text()
        finally:
            pk_logger = logging.getLogger('pkpres')
            for handler in list(pk_logger.handlers):
                if isinstance(handler, logging.FileHandler):
                    pk_logger.removeHandler(handler)
                    handler.close()
