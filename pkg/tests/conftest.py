import pytest

from trajecta.cli import main

STUDENT_SENTENCE = "Query trajectories of students during Jan. 10 2014"

# filled by test_acceptance; echoed after the run so the verdict lines
# survive pytest's output capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def demo_root(tmp_path_factory):
    """A small but fully built workspace shared by service/CLI tests."""
    root = tmp_path_factory.mktemp("workspace")
    base = ["--root", str(root)]
    assert main(base + ["synth", "--users", "12", "--days", "2", "--pois", "200",
                        "--stations", "30", "--seed", "7"]) == 0
    assert main(base + ["ingest"]) == 0
    assert main(base + ["train-topics", "--topics", "4", "--iters", "150", "--seed", "1"]) == 0
    assert main(base + ["train-embed", "--dim", "16"]) == 0
    assert main(base + ["build-index", "--window", "600"]) == 0
    return root


@pytest.fixture(scope="session")
def demo_workspace(demo_root):
    from trajecta.workspace import load_workspace

    return load_workspace(str(demo_root))
