import subprocess

import pytest

SIM = "barrier-sta"  # the simulator CLI is the only interface used


def run_sim(*args):
    proc = subprocess.run([SIM, *args], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("csv")


@pytest.fixture(scope="session")
def steps_csv(data_dir):
    out = data_dir / "steps.csv"
    run_sim("run", "--scenario", "steps", "--out", str(out), "--set", "horizon=0.5")
    return out


@pytest.fixture(scope="session")
def sinusoid_csv(data_dir):
    out = data_dir / "sinusoid.csv"
    run_sim("run", "--scenario", "sinusoid", "--out", str(out), "--set", "horizon=0.5")
    return out


@pytest.fixture(scope="session")
def compare_csvs(data_dir):
    out = data_dir / "cmp.csv"
    run_sim("compare", "--scenario", "steps", "--out", str(out), "--set", "horizon=0.3")
    return data_dir / "cmp_single.csv", data_dir / "cmp_double.csv"
