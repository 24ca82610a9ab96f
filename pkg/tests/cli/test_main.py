from hbn_relax import __version__
from hbn_relax.cli.main import cli


class TestMainCLI:
    """Smoke tests for main CLI functionality."""

    def test_cli_help(self, cli_runner):
        """Test that CLI shows help."""
        result = cli_runner.invoke(cli, ['--help'])
        assert result.exit_code == 0
        assert 'hbn-relax' in result.output
        assert 'Commands:' in result.output

    def test_cli_no_args(self, cli_runner):
        """Test CLI with no arguments shows usage."""
        result = cli_runner.invoke(cli, [])
        assert result.exit_code == 2  # Click returns 2 for missing command
        assert 'Usage:' in result.output

    def test_cli_invalid_command(self, cli_runner):
        """Test CLI with invalid command."""
        result = cli_runner.invoke(cli, ['invalid-command'])
        assert result.exit_code != 0
        assert 'Error' in result.output or 'No such command' in result.output

    def test_cli_commands(self, cli_runner):
        """Test that every command is registered."""
        result = cli_runner.invoke(cli, ['--help'])
        for cmd in ['simulate', 'fit-decay', 'collect-series', 'fit-odmr', 'fit-temp', 'predict-t1', 'config']:
            assert cmd in result.output

    def test_cli_version(self, cli_runner):
        """Test --version prints the toolkit version."""
        result = cli_runner.invoke(cli, ['--version'])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_verbose_flag(self, cli_runner):
        """Test -vv is accepted before a command."""
        result = cli_runner.invoke(cli, ['-vv', 'config', '--help'])
        assert result.exit_code == 0
