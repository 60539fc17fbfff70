import sys

import pytest

from acouswarm.piston import internal_drag
from acouswarm.scenario import FluidMedium, RobotDesign, Scenario, SwarmScenario


@pytest.fixture(scope="session")
def robot():
    return RobotDesign()


@pytest.fixture(scope="session")
def fluid():
    return FluidMedium()


@pytest.fixture(scope="session")
def k_f(robot, fluid):
    return internal_drag(robot, fluid)


@pytest.fixture(scope="session")
def geom(robot):
    return robot.piston


def swarm_scenario(n_robots: float, **kw) -> Scenario:
    return Scenario(swarm=SwarmScenario(robot_count=n_robots), **kw)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(module.RESULTS):
        terminalreporter.write_line(line)
