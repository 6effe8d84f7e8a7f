"""Command-line interface.

Exit codes are stable: 0 success, 1 usage error, 2 parse/validation error,
3 negative verdict, 4 correspondence falsification.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report
from .dot import export_dot
from .interpretation import (
    InconsistentBeliefError,
    InterpretationBundle,
    belief_map_from_regulating_set,
    belief_trace,
    is_consistent_belief_map,
    is_subjective_good_regulator,
    normative_map_from_good_set,
    triviality_report,
)
from .regulation import RegulationSituation, largest_regulating_set
from .scenario import (
    ScenarioError,
    ScenarioFile,
    build_belief_map,
    build_machines,
    build_model,
    build_system,
    load_scenario,
    resolve_good_set,
    resolve_regulating_set,
)
from .verify import verify_machines, verify_random_instances

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_NEGATIVE = 3
EXIT_FALSIFIED = 4


class _CliError(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # the exit-code contract reserves 2 for scenario problems, so usage is 1
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _load(path: str) -> ScenarioFile:
    try:
        return load_scenario(path)
    except ScenarioError as exc:
        raise _CliError(EXIT_PARSE, f"[{exc.code}] {exc}") from exc
    except OSError as exc:
        raise _CliError(EXIT_PARSE, f"cannot read scenario: {exc}") from exc


def _emit(fragment: dict, output: str) -> None:
    if output == "json":
        sys.stdout.write(report.render_json(fragment))
    else:
        sys.stdout.write(report.render_text(fragment))


def _require_good(sc: ScenarioFile, system):
    good = resolve_good_set(sc, system)
    if good is None:
        raise _CliError(EXIT_USAGE, "scenario has no good-set section")
    return good


class _Synthesis:
    """Shared by synthesize/report: resolve R, build maps, judge the result."""

    def __init__(self, sc: ScenarioFile, system) -> None:
        self.system = system
        self.good = _require_good(sc, system)
        self.largest = largest_regulating_set(RegulationSituation(system, self.good))
        supplied = resolve_regulating_set(sc, system)
        self.used = supplied if supplied is not None else self.largest
        if self.used is None:
            raise _CliError(
                EXIT_NEGATIVE,
                "not a good regulator (no non-empty forward-closed subset of the"
                " good set exists) and no regulating-set was supplied",
            )
        n_agent = len(system.agent.states)
        n_env = len(system.environment.states)
        self.psi = belief_map_from_regulating_set(self.used, n_agent, n_env)
        self.phi = normative_map_from_good_set(self.good, n_agent, n_env)
        bundle = InterpretationBundle(
            agent=system.agent, model=system.environment, psi=self.psi, phi=self.phi
        )
        try:
            subjective = is_subjective_good_regulator(bundle)
            witness = None
        except InconsistentBeliefError as exc:
            subjective = None
            witness = _witness_dict(system, exc.witness)
        self.fragment = report.synthesize_fragment(
            system, self.used, self.largest, self.psi, self.phi,
            subjective, witness, triviality_report(self.psi),
        )
        ok = subjective is not None and subjective.subjective_good_regulator
        self.exit_code = EXIT_OK if ok else EXIT_NEGATIVE


def _witness_dict(system_or_bundle, witness) -> dict:
    agent = system_or_bundle.agent
    if isinstance(system_or_bundle, InterpretationBundle):
        model_states = system_or_bundle.model.states
    else:
        model_states = system_or_bundle.environment.states
    return {
        "state": agent.states[witness.x],
        "sensor": agent.interface.sensors[witness.s],
        "model_state": model_states[witness.z_next],
    }


def cmd_check(args) -> int:
    sc = _load(args.scenario)
    system = build_system(sc)
    good = _require_good(sc, system)
    largest = largest_regulating_set(RegulationSituation(system, good))
    _emit(report.check_fragment(system, largest), args.output)
    return EXIT_OK if largest is not None else EXIT_NEGATIVE


def cmd_synthesize(args) -> int:
    sc = _load(args.scenario)
    synthesis = _Synthesis(sc, build_system(sc))
    _emit(synthesis.fragment, args.output)
    return synthesis.exit_code


def cmd_interpret(args) -> int:
    sc = _load(args.scenario)
    psi = build_belief_map(sc)
    if psi is None:
        raise _CliError(EXIT_USAGE, "scenario has no belief-map section")
    agent, env = build_machines(sc)
    model = build_model(sc) or env
    bundle = InterpretationBundle(agent=agent, model=model, psi=psi)
    result = is_consistent_belief_map(bundle)
    witness = None if result.consistent else _witness_dict(bundle, result.witness)
    _emit(report.interpret_fragment(witness), args.output)
    return EXIT_OK if result.consistent else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    if args.trials == 0:
        _emit(report.verification_fragment({}), args.output)
        return EXIT_OK
    if args.random:
        tally, disagreements = verify_random_instances(args.trials, args.seed)
    else:
        if args.scenario is None:
            raise _CliError(EXIT_USAGE, "give a scenario file or pass --random")
        agent, env = build_machines(_load(args.scenario))
        tally, disagreements = verify_machines(agent, env, args.trials, args.seed)
    _emit(report.verification_fragment(tally), args.output)
    if disagreements:
        for item in disagreements:
            sys.stderr.write(f"falsified {item.check}: {item.description}\n")
        return EXIT_FALSIFIED
    return EXIT_OK


def _trace_belief_map(sc: ScenarioFile, system):
    supplied = build_belief_map(sc)
    if supplied is not None:
        return supplied
    n_agent = len(system.agent.states)
    n_env = len(system.environment.states)
    regulating = resolve_regulating_set(sc, system)
    if regulating is not None:
        return belief_map_from_regulating_set(regulating, n_agent, n_env)
    good = resolve_good_set(sc, system)
    if good is not None:
        largest = largest_regulating_set(RegulationSituation(system, good))
        if largest is not None:
            return belief_map_from_regulating_set(largest, n_agent, n_env)
    raise _CliError(
        EXIT_USAGE,
        "no belief map available: give a belief-map, a regulating-set, or a"
        " good-set with a regulating subset",
    )


def _parse_start(value: str, system) -> tuple[int, int]:
    if "," not in value:
        raise _CliError(EXIT_USAGE, "start state must look like AGENT,ENV")
    xl, yl = value.split(",", 1)
    try:
        return system.agent.state_index(xl), system.environment.state_index(yl)
    except ValueError as exc:
        raise _CliError(EXIT_USAGE, str(exc)) from exc


def cmd_trace(args) -> int:
    sc = _load(args.scenario)
    system = build_system(sc)
    psi = _trace_belief_map(sc, system)
    if psi.model_size != len(system.environment.states):
        raise _CliError(
            EXIT_PARSE, "belief map ranges over a model sized differently"
            " than the environment; tracing needs them to match"
        )
    start = _parse_start(args.start, system)
    bundle = InterpretationBundle(agent=system.agent, model=system.environment, psi=psi)
    consistency = is_consistent_belief_map(bundle)
    if not consistency:
        sys.stderr.write(
            "belief map is inconsistent: witness"
            f" {_witness_dict(bundle, consistency.witness)}\n"
        )
        return EXIT_NEGATIVE
    try:
        trace = belief_trace(bundle, system.environment, start, args.steps)
    except ValueError as exc:
        if "outside believed set" in str(exc):
            sys.stderr.write("start state outside believed set\n")
            return EXIT_NEGATIVE
        raise
    sys.stdout.write("t\tx\ty\tbeliefs\tcontained\n")
    for record in trace.records:
        labels = report.set_labels(record.beliefs, system.environment.states)
        sys.stdout.write(
            "{}\t{}\t{}\t{}\t{}\n".format(
                record.t,
                system.agent.states[record.x],
                system.environment.states[record.y],
                ",".join(labels),
                "true" if record.contained else "false",
            )
        )
    if trace.violations:
        sys.stderr.write(
            f"belief containment violated at steps {list(trace.violations)}\n"
        )
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_export_dot(args) -> int:
    sc = _load(args.scenario)
    system = build_system(sc)
    good = resolve_good_set(sc, system)
    regulating = resolve_regulating_set(sc, system)
    if regulating is None and good is not None:
        regulating = largest_regulating_set(RegulationSituation(system, good))
    sys.stdout.write(export_dot(system, good, regulating))
    return EXIT_OK


def cmd_report(args) -> int:
    from . import figures  # deferred: matplotlib is heavy

    sc = _load(args.scenario)
    system = build_system(sc)
    synthesis = _Synthesis(sc, system)
    psi, phi, used = synthesis.psi, synthesis.phi, synthesis.used

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = out_dir / "report.json"
    json_path.write_text(report.render_json(synthesis.fragment), encoding="utf-8")
    written.append(json_path)

    states_path = out_dir / "states.tsv"
    with open(states_path, "w", encoding="utf-8") as handle:
        handle.write("x\ty\tin_good\tin_regulating\tnext_x\tnext_y\n")
        for w in range(system.n_joint):
            xl, yl = system.joint_labels(w)
            tx, ty = system.joint_labels(system.step_table[w])
            handle.write(
                "{}\t{}\t{}\t{}\t{}\t{}\n".format(
                    xl, yl, int(w in synthesis.good), int(w in used), tx, ty
                )
            )
    written.append(states_path)

    beliefs_path = out_dir / "beliefs.tsv"
    with open(beliefs_path, "w", encoding="utf-8") as handle:
        handle.write("x\tbeliefs\tnorms\tbelief_size\n")
        for x in range(len(system.agent.states)):
            handle.write(
                "{}\t{}\t{}\t{}\n".format(
                    system.agent.states[x],
                    ",".join(report.set_labels(psi[x], system.environment.states)),
                    ",".join(report.set_labels(phi[x], system.environment.states)),
                    len(psi[x]),
                )
            )
    written.append(beliefs_path)

    space_path = out_dir / "state_space.png"
    figures.render_state_space(system, synthesis.good, used, space_path)
    written.append(space_path)

    maps_path = out_dir / "belief_maps.png"
    figures.render_belief_maps(
        system.agent.states, system.environment.states, psi, phi, maps_path
    )
    written.append(maps_path)

    for path in written:
        sys.stdout.write(f"wrote {path}\n")
    return synthesis.exit_code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--output", choices=("json", "text"), default="text",
        help="report format (default: text)",
    )
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument(
        "--trials", type=int, default=100, help="number of randomized trials"
    )

    parser = _Parser(
        prog="goodreg",
        description="Analyze regulation and belief interpretations of finite"
        " agent-environment systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func, help_text: str, scenario="required"):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if scenario == "required":
            p.add_argument("scenario", help="scenario YAML file")
        elif scenario == "optional":
            p.add_argument("scenario", nargs="?", help="scenario YAML file")
        p.set_defaults(func=func)
        return p

    add("check", cmd_check, "decide whether the agent is a good regulator")
    add("synthesize", cmd_synthesize, "derive belief and normative maps")
    add("interpret", cmd_interpret, "consistency-check a supplied belief map")
    p_verify = add(
        "verify", cmd_verify, "cross-check the regulator correspondences",
        scenario="optional",
    )
    p_verify.add_argument(
        "--random", action="store_true",
        help="verify random instances instead of the scenario's machines",
    )
    p_trace = add("trace", cmd_trace, "roll the coupled system, tracking beliefs")
    p_trace.add_argument(
        "--start", required=True, help="start state as AGENT,ENV labels"
    )
    p_trace.add_argument("--steps", type=int, default=10, help="steps to run")
    add("export-dot", cmd_export_dot, "emit the transition graph in DOT syntax")
    p_report = add(
        "report", cmd_report, "write JSON, TSV tables and figures to a directory"
    )
    p_report.add_argument("--out-dir", required=True, help="output directory")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except _CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
