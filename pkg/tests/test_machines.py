"""Tests for machine construction, validation, and the coupled dynamics."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from goodreg import (
    Interface,
    InterfaceMismatchError,
    InstanceSpec,
    JointState,
    MealyMachine,
    MooreMachine,
    couple,
    mealy_evolve,
    moore_update,
    random_instance,
    readout,
    step,
    trajectory,
)

from conftest import (
    TOGGLE_STEP_TABLE,
    build_doorstop,
    build_toggle_agent,
    build_toggle_env,
    build_toggle_interface,
)


# ---------------------------------------------------------------- validation

def test_interface_rejects_empty_and_duplicate_labels():
    with pytest.raises(ValueError):
        Interface(sensors=(), actions=("a",))
    with pytest.raises(ValueError):
        Interface(sensors=("s",), actions=())
    with pytest.raises(ValueError):
        Interface(sensors=("s", "s"), actions=("a",))


def test_moore_rejects_bad_tables():
    iface = build_toggle_interface()
    with pytest.raises(ValueError):  # readout too short
        MooreMachine(states=("x0", "x1"), readout=(0,), update=((0, 0), (0, 0)), interface=iface)
    with pytest.raises(ValueError):  # readout entry out of range
        MooreMachine(states=("x0",), readout=(2,), update=((0, 0),), interface=iface)
    with pytest.raises(ValueError):  # non-total update row
        MooreMachine(states=("x0",), readout=(0,), update=((0,),), interface=iface)
    with pytest.raises(ValueError):  # update target out of range
        MooreMachine(states=("x0",), readout=(0,), update=((0, 1),), interface=iface)
    with pytest.raises(ValueError):  # duplicate state labels
        MooreMachine(states=("x0", "x0"), readout=(0, 0), update=((0, 0), (0, 0)), interface=iface)


def test_mealy_rejects_bad_tables():
    iface = build_toggle_interface()
    with pytest.raises(ValueError):  # row for a missing action
        MealyMachine(states=("y0",), evolve=(((0, 0),),), interface=iface)
    with pytest.raises(ValueError):  # successor out of range
        MealyMachine(states=("y0",), evolve=(((1, 0), (0, 0)),), interface=iface)
    with pytest.raises(ValueError):  # sensor out of range
        MealyMachine(states=("y0",), evolve=(((0, 2), (0, 0)),), interface=iface)


def test_couple_rejects_interface_mismatch():
    other = Interface(sensors=("lo", "hi"), actions=("stay", "flip", "jump"))
    env = MealyMachine(
        states=("y0",), evolve=(((0, 0), (0, 0), (0, 1)),), interface=other
    )
    with pytest.raises(InterfaceMismatchError):
        couple(build_toggle_agent(), env)


def test_machines_are_immutable():
    agent = build_toggle_agent()
    with pytest.raises(AttributeError):
        agent.readout = (1, 1)


# ------------------------------------------------------------ the operations

def test_readout_toggle_world():
    agent = build_toggle_agent()
    assert agent.interface.actions[readout(agent, 1)] == "flip"
    assert agent.interface.actions[readout(agent, 0)] == "stay"
    with pytest.raises(ValueError):
        readout(agent, 2)


def test_readout_doorstop():
    agent, _ = build_doorstop()
    assert readout(agent, 0) == 0


def test_readout_identity_like():
    iface = Interface(sensors=("s0", "s1"), actions=("a0", "a1"))
    agent = MooreMachine(
        states=("x0", "x1"), readout=(0, 1), update=((0, 0), (1, 1)), interface=iface
    )
    assert readout(agent, 1) == 1


def test_moore_update_toggle_world():
    agent = build_toggle_agent()
    hi = agent.interface.sensor_index("hi")
    assert moore_update(agent, 0, hi) == 1
    with pytest.raises(ValueError):
        moore_update(agent, 0, 5)
    with pytest.raises(ValueError):
        moore_update(agent, 9, 0)


def test_moore_update_doorstop_and_copy_agent():
    agent, _ = build_doorstop()
    assert moore_update(agent, 0, 0) == 0
    iface = Interface(sensors=("s0", "s1"), actions=("a0",))
    copy_agent = MooreMachine(
        states=("x0", "x1"), readout=(0, 0), update=((0, 1), (0, 1)), interface=iface
    )
    assert moore_update(copy_agent, 0, 1) == 1


def test_mealy_evolve_toggle_world():
    env = build_toggle_env()
    flip = env.interface.action_index("flip")
    stay = env.interface.action_index("stay")
    assert mealy_evolve(env, 0, flip) == (1, 1)  # (y1, hi)
    assert mealy_evolve(env, 0, stay) == (0, 0)  # (y0, lo)
    with pytest.raises(ValueError):
        mealy_evolve(env, 0, 9)
    with pytest.raises(ValueError):
        mealy_evolve(env, 9, 0)


def test_mealy_evolve_one_state():
    _, env = build_doorstop()
    assert mealy_evolve(env, 0, 0) == (0, 0)


def test_couple_sizes(toggle_system, doorstop_system):
    assert toggle_system.n_joint == 4
    assert doorstop_system.n_joint == 1
    assert doorstop_system.step_table == (0,)


def test_toggle_step_table_matches_hand_evaluation(toggle_system):
    assert toggle_system.step_table == TOGGLE_STEP_TABLE


def test_step_values(toggle_system, doorstop_system):
    assert step(doorstop_system, (0, 0)) == JointState(0, 0)
    assert step(toggle_system, (0, 0)) == JointState(0, 0)
    assert step(toggle_system, (1, 0)) == JointState(1, 1)
    assert step(toggle_system, (0, 1)) == JointState(1, 1)
    assert step(toggle_system, (1, 1)) == JointState(0, 0)
    with pytest.raises(ValueError):
        step(toggle_system, (2, 0))


def test_joint_index_is_x_major(toggle_system):
    assert [toggle_system.joint_index(toggle_system.joint_state(i)) for i in range(4)] == [0, 1, 2, 3]
    assert toggle_system.joint_index((1, 0)) == 2
    assert toggle_system.joint_labels(2) == ("x1", "y0")


def test_trajectory_toggle_world(toggle_system):
    assert trajectory(toggle_system, (0, 0), 0) == [JointState(0, 0)]
    walk = trajectory(toggle_system, (0, 0), 4)
    assert walk == [JointState(0, 0)] * 5
    bounce = trajectory(toggle_system, (0, 1), 3)
    assert bounce == [
        JointState(0, 1),
        JointState(1, 1),
        JointState(0, 0),
        JointState(0, 0),
    ]
    with pytest.raises(ValueError):
        trajectory(toggle_system, (0, 0), -1)


def test_trajectory_one_state(doorstop_system):
    assert trajectory(doorstop_system, (0, 0), 3) == [JointState(0, 0)] * 4


def test_trajectory_last_element_is_iterated_step(toggle_system):
    for w0 in range(4):
        w = toggle_system.joint_state(w0)
        for n in range(6):
            walk = trajectory(toggle_system, w, n)
            probe = w
            for _ in range(n):
                probe = step(toggle_system, probe)
            assert walk[-1] == probe


# ----------------------------------------------------------------- properties

def small_systems():
    """Coupled systems sampled via seeded random instances."""
    return st.builds(
        lambda nx, ny, ns, na, seed: couple(
            *random_instance(InstanceSpec(nx, ny, ns, na, seed))
        ),
        nx=st.integers(1, 3),
        ny=st.integers(1, 3),
        ns=st.integers(1, 3),
        na=st.integers(1, 3),
        seed=st.integers(0, 2**31),
    )


@given(system=small_systems())
def test_composition_law_exhaustive(system):
    """step equals readout -> evolve -> update at every joint state."""
    agent, env = system.agent, system.environment
    for x in range(len(agent.states)):
        for y in range(len(env.states)):
            y2, s = mealy_evolve(env, y, readout(agent, x))
            assert step(system, (x, y)) == JointState(moore_update(agent, x, s), y2)


@given(system=small_systems(), n=st.integers(0, 5), m=st.integers(0, 5))
def test_trajectory_splits(system, n, m):
    """Running n+m steps equals running n steps then m more."""
    w0 = JointState(0, 0)
    whole = trajectory(system, w0, n + m)
    first = trajectory(system, w0, n)
    second = trajectory(system, first[-1], m)
    assert whole == first + second[1:]


def test_step_deterministic_across_rebuilds():
    a = couple(build_toggle_agent(), build_toggle_env())
    b = couple(build_toggle_agent(), build_toggle_env())
    assert a.step_table == b.step_table
    assert a == b
