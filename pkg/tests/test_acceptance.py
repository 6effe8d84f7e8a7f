"""Acceptance criteria, one test per criterion, each printing a pass/fail line.

Every expected value here is either forced by a definition, hand-derived from
the toggle-world table in conftest, or computed by an independent oracle
(exhaustive subset enumeration, brute-force update scans).  Runtime caps are
asserted as stated.
"""

import random
import time

from goodreg import (
    InstanceSpec,
    InterpretationBundle,
    RegulationSituation,
    StateSet,
    belief_map_from_regulating_set,
    belief_trace,
    couple,
    enumerate_forward_closed_subsets,
    largest_regulating_set,
    possibilistic_update,
    random_instance,
    random_state_set,
    trajectory,
    verify_closure_consistency,
    verify_regulator_equivalence,
)
from goodreg.cli import main
from goodreg.scenario import load_scenario, parse_scenario, serialize_scenario

from conftest import FIXTURES_DIR, GOLDEN_DIR


def _report(number: int, name: str, ok: bool, elapsed: float) -> None:
    print(f"[acceptance] criterion {number} ({name}): {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s)")


def _random_sizes(rng, max_sizes):
    return tuple(rng.randint(1, m) for m in max_sizes)


def test_criterion_1_closure_consistency_exhaustive():
    """>= 50 instances up to (3,3,3,3); all subsets agree; < 30 s."""
    start = time.perf_counter()
    rng = random.Random(101)
    failures = 0
    instances = 60
    for _ in range(instances):
        nx, ny, ns, na = _random_sizes(rng, (3, 3, 3, 3))
        agent, env = random_instance(InstanceSpec(nx, ny, ns, na, rng.getrandbits(32)))
        n = nx * ny
        assert n <= 10
        for bits in range(1 << n):
            if not verify_closure_consistency(agent, env, StateSet(n, bits)).agree:
                failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 30.0
    _report(1, "closure/consistency equivalence, exhaustive", ok, elapsed)
    assert failures == 0
    assert elapsed < 30.0


def test_criterion_2_closure_consistency_randomized():
    """1000 random (instance, subset) pairs up to (4,4,3,3); < 10 s."""
    start = time.perf_counter()
    rng = random.Random(202)
    failures = 0
    for _ in range(1000):
        nx, ny, ns, na = _random_sizes(rng, (4, 4, 3, 3))
        agent, env = random_instance(InstanceSpec(nx, ny, ns, na, rng.getrandbits(32)))
        subset = random_state_set(nx * ny, rng)
        if not verify_closure_consistency(agent, env, subset).agree:
            failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 10.0
    _report(2, "closure/consistency equivalence, randomized", ok, elapsed)
    assert failures == 0
    assert elapsed < 10.0


def test_criterion_3_regulator_equivalence():
    """1000 random (instance, good, candidate) triples, half with the candidate
    forced inside the good set; overall and per-component agreement; < 15 s."""
    start = time.perf_counter()
    rng = random.Random(303)
    failures = 0
    component_failures = 0
    for trial in range(1000):
        nx, ny, ns, na = _random_sizes(rng, (4, 4, 3, 3))
        agent, env = random_instance(InstanceSpec(nx, ny, ns, na, rng.getrandbits(32)))
        n = nx * ny
        good = random_state_set(n, rng)
        candidate = random_state_set(n, rng)
        if trial % 2 == 0:
            candidate = candidate & good
        verdict = verify_regulator_equivalence(agent, env, good, candidate)
        if not verdict.agree:
            failures += 1
        component_failures += sum(1 for c in verdict.components if not c.agree)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and component_failures == 0 and elapsed < 15.0
    _report(3, "regulator equivalence with components", ok, elapsed)
    assert failures == 0
    assert component_failures == 0
    assert elapsed < 15.0


def test_criterion_4_fixpoint_vs_enumeration():
    """100 instances with joint space <= 14: fixpoint equals the union of all
    enumerated forward-closed subsets of the good set; < 60 s."""
    start = time.perf_counter()
    rng = random.Random(404)
    failures = 0
    produced = 0
    while produced < 100:
        nx, ny = rng.randint(1, 7), rng.randint(1, 7)
        if nx * ny > 14:
            continue
        produced += 1
        ns, na = rng.randint(1, 3), rng.randint(1, 3)
        agent, env = random_instance(InstanceSpec(nx, ny, ns, na, rng.getrandbits(32)))
        system = couple(agent, env)
        n = nx * ny
        sit = RegulationSituation(system, random_state_set(n, rng))
        union = StateSet.empty(n)
        for subset in enumerate_forward_closed_subsets(sit):
            union = union | subset
        largest = largest_regulating_set(sit)
        if largest is None:
            largest = StateSet.empty(n)
        if largest != union:
            failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 60.0
    _report(4, "fixpoint vs. enumeration oracle", ok, elapsed)
    assert failures == 0
    assert elapsed < 60.0


def test_criterion_5_update_rule_laws():
    """Monotonicity and union-compatibility of the update rule, exhaustive over
    all belief pairs, actions and sensors on 20 random models; < 10 s."""
    start = time.perf_counter()
    rng = random.Random(505)
    violations = 0
    for _ in range(20):
        nz = rng.randint(1, 6)
        ns, na = rng.randint(1, 3), rng.randint(1, 3)
        _, model = random_instance(InstanceSpec(1, nz, ns, na, rng.getrandbits(32)))
        n_beliefs = 1 << nz
        # cache update(B, a, s) for every belief pattern once
        cache = [
            [
                [
                    possibilistic_update(model, StateSet(nz, bits), a, s).bits
                    for s in range(ns)
                ]
                for a in range(na)
            ]
            for bits in range(n_beliefs)
        ]
        for b1 in range(n_beliefs):
            for b2 in range(n_beliefs):
                for a in range(na):
                    for s in range(ns):
                        u1, u2 = cache[b1][a][s], cache[b2][a][s]
                        if b1 | b2 == b2 and u1 | u2 != u2:
                            violations += 1  # monotonicity broke
                        if cache[b1 | b2][a][s] != u1 | u2:
                            violations += 1  # union-compatibility broke
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 10.0
    _report(5, "update-rule laws", ok, elapsed)
    assert violations == 0
    assert elapsed < 10.0


def test_criterion_6_containment_at_runtime():
    """50 random good-regulator instances: 100-step trajectories from every
    state of the regulating set stay in it (hence in the good set), and the
    belief trace keeps the true state inside the attributed beliefs."""
    start = time.perf_counter()
    rng = random.Random(606)
    checked = 0
    violations = 0
    while checked < 50:
        nx, ny, ns, na = _random_sizes(rng, (4, 4, 3, 3))
        agent, env = random_instance(InstanceSpec(nx, ny, ns, na, rng.getrandbits(32)))
        system = couple(agent, env)
        n = nx * ny
        # biased-dense good sets make regulating sets common enough to sample
        good = StateSet(n, rng.getrandbits(n) | rng.getrandbits(n))
        regulating = largest_regulating_set(RegulationSituation(system, good))
        if regulating is None:
            continue
        checked += 1
        psi = belief_map_from_regulating_set(regulating, nx, ny)
        bundle = InterpretationBundle(agent=agent, model=env, psi=psi)
        for w0 in regulating:
            for w in trajectory(system, system.joint_state(w0), 100):
                index = system.joint_index(w)
                if index not in regulating or index not in good:
                    violations += 1
            trace = belief_trace(bundle, env, system.joint_state(w0), 100)
            violations += len(trace.violations)
    elapsed = time.perf_counter() - start
    ok = violations == 0
    _report(6, "runtime containment and belief tracking", ok, elapsed)
    assert violations == 0


def test_criterion_7_doorstop_triviality():
    """The one-agent-state fixture yields constant beliefs equal to the
    regulating set, norms equal to the good set, and one distinct belief set."""
    start = time.perf_counter()
    sc = load_scenario(FIXTURES_DIR / "doorstop.yaml")
    from goodreg.scenario import build_system, resolve_good_set
    from goodreg import normative_map_from_good_set, triviality_report

    system = build_system(sc)
    assert len(system.agent.states) == 1
    good = resolve_good_set(sc, system)
    regulating = largest_regulating_set(RegulationSituation(system, good))
    psi = belief_map_from_regulating_set(
        regulating, 1, len(system.environment.states)
    )
    phi = normative_map_from_good_set(good, 1, len(system.environment.states))
    stats = triviality_report(psi)
    ok = (
        stats.constant
        and stats.distinct_beliefs == 1
        and psi[0] == StateSet(len(system.environment.states), regulating.bits)
        and phi[0] == StateSet(len(system.environment.states), good.bits)
    )
    elapsed = time.perf_counter() - start
    _report(7, "one-state fixture has a trivial interpretation", ok, elapsed)
    assert stats.constant
    assert stats.distinct_beliefs == 1
    assert psi[0].indices() == regulating.indices()
    assert phi[0].indices() == good.indices()


def test_criterion_8_cli_determinism(capsys):
    """check/synthesize/export-dot reproduce the frozen goldens byte for byte,
    and parse of serialize is the identity on every fixture."""
    start = time.perf_counter()
    toggle = str(FIXTURES_DIR / "toggle-world.yaml")
    expectations = {
        "toggle-world.check.json": ["check", toggle, "--output", "json"],
        "toggle-world.check.txt": ["check", toggle, "--output", "text"],
        "toggle-world.synthesize.json": ["synthesize", toggle, "--output", "json"],
        "toggle-world.synthesize.txt": ["synthesize", toggle, "--output", "text"],
        "toggle-world.dot": ["export-dot", toggle],
    }
    mismatches = []
    for name, argv in expectations.items():
        code = main(argv)
        out = capsys.readouterr().out
        frozen = (GOLDEN_DIR / name).read_text(encoding="utf-8")
        if code != 0 or out != frozen:
            mismatches.append(name)
    round_trip_failures = []
    for path in sorted(FIXTURES_DIR.glob("*.yaml")):
        sc = load_scenario(path)
        if parse_scenario(serialize_scenario(sc)) != sc:
            round_trip_failures.append(path.name)
    elapsed = time.perf_counter() - start
    ok = not mismatches and not round_trip_failures
    with capsys.disabled():
        _report(8, "CLI determinism and scenario round trips", ok, elapsed)
    assert mismatches == []
    assert round_trip_failures == []
