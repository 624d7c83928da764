import pytest

from coxtorus import coxoracle, equivariant, fingroup, gitquot, seeds
from coxtorus.cli import Context, RunConfig


@pytest.fixture(scope="session")
def ctx():
    return Context(RunConfig())


@pytest.fixture(scope="session")
def weights():
    return gitquot.PicWeightTable.from_degree_matrix(seeds.load_degree_matrix())


@pytest.fixture(scope="session")
def group():
    return fingroup.enumerate_group(seeds.load_group_generators())


@pytest.fixture(scope="session")
def fixed_points():
    return equivariant.fixed_point_data(seeds.load_compasses(), seeds.load_mu_table())


@pytest.fixture(scope="session")
def gen_table():
    return coxoracle.GeneratorTable.from_seeds(seeds.load_generators(), seeds.load_degree_matrix())


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
