import pytest

from emoface.cli import main as cli_main


@pytest.fixture(scope="session")
def demo_bundle(tmp_path_factory):
    """Synthetic corpora plus small trained checkpoints and a service config.

    Built once through the CLI so the bundle path is exercised too.
    """
    out = tmp_path_factory.mktemp("demo")
    assert cli_main(["make-demo", "--out", str(out), "--quick", "--seed", "3"]) == 0
    return out
