"""Shared builders: the hand-validated toggle world and doorstop systems.

The toggle-world tables below are the canonical small scenario every frozen
expected value in the suite was hand-derived from:

    sensors (lo, hi), actions (stay, flip)
    agent x0: act stay, on lo -> x0, on hi -> x1
    agent x1: act flip, on lo -> x0, on hi -> x1
    env   y0: stay -> (y0, lo), flip -> (y1, hi)
    env   y1: stay -> (y1, hi), flip -> (y0, lo)

which gives the joint dynamics (x-major indices in brackets):

    (x0,y0)[0] -> (x0,y0)[0]      (x0,y1)[1] -> (x1,y1)[3]
    (x1,y0)[2] -> (x1,y1)[3]      (x1,y1)[3] -> (x0,y0)[0]
"""

from pathlib import Path

import pytest

from goodreg import Interface, MealyMachine, MooreMachine, couple

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = REPO_ROOT / "fixtures"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

TOGGLE_STEP_TABLE = (0, 3, 3, 0)


def build_toggle_interface() -> Interface:
    return Interface(sensors=("lo", "hi"), actions=("stay", "flip"))


def build_toggle_agent() -> MooreMachine:
    return MooreMachine(
        states=("x0", "x1"),
        readout=(0, 1),
        update=((0, 1), (0, 1)),
        interface=build_toggle_interface(),
    )


def build_toggle_env() -> MealyMachine:
    return MealyMachine(
        states=("y0", "y1"),
        evolve=(((0, 0), (1, 1)), ((1, 1), (0, 0))),
        interface=build_toggle_interface(),
    )


def build_doorstop() -> tuple[MooreMachine, MealyMachine]:
    interface = Interface(sensors=("felt",), actions=("hold",))
    agent = MooreMachine(
        states=("wedge",), readout=(0,), update=((0,),), interface=interface
    )
    env = MealyMachine(states=("door",), evolve=(((0, 0),),), interface=interface)
    return agent, env


def build_one_state_agent_cycle_env() -> tuple[MooreMachine, MealyMachine]:
    """One-state agent in a three-state environment cycling y0 <-> y1, y2 fixed."""
    interface = Interface(sensors=("s0",), actions=("a0",))
    agent = MooreMachine(
        states=("x0",), readout=(0,), update=((0,),), interface=interface
    )
    env = MealyMachine(
        states=("y0", "y1", "y2"),
        evolve=(((1, 0),), ((0, 0),), ((2, 0),)),
        interface=interface,
    )
    return agent, env


@pytest.fixture
def toggle_agent():
    return build_toggle_agent()


@pytest.fixture
def toggle_env():
    return build_toggle_env()


@pytest.fixture
def toggle_system(toggle_agent, toggle_env):
    return couple(toggle_agent, toggle_env)


@pytest.fixture
def doorstop_system():
    return couple(*build_doorstop())
