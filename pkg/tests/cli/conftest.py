import pytest
from typer.testing import CliRunner

from direction_lab.cli.app import app


#CLI fixtures
@pytest.fixture(scope="session")
def runner():
    return CliRunner()


@pytest.fixture(scope="session")
def smoke_run(runner, tmp_path_factory):
    """One smoke-grid run over both modes of the bundled data, with validation."""
    out_dir = tmp_path_factory.mktemp("smoke")
    result = runner.invoke(app, [
        "run",
        "--input", "synthetic",
        "--validation", "synthetic",
        "--grid", "smoke",
        "--out", str(out_dir),
    ])
    assert result.exit_code == 0, result.stdout
    return out_dir
