"""Scenario-driven command line front end.

Every command maps 1:1 onto a library operation; the CLI only parses,
dispatches, and formats.  Output is deterministic: identical
(scenario, seed, format) inputs give byte-identical output.

Exit codes: 0 success, 1 usage error, 2 parse/semantic error, 3 runtime
operation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import calculus, universe as up
from .attributes import inverse_image_partition, join_attributes
from .errors import QmSetsError, ScenarioError
from .gf2 import ket_table
from .group_action import orbit_partition
from .scenario import Command, Scenario, parse_scenario
from .universe import (
    DEFAULT_ENUMERATION_BOUND,
    SetPartition,
    Universe,
    enumerate_partitions,
    refines,
)

FORMATS = ("text", "csv", "json")


def _fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def _decimal_str(q: Fraction) -> str:
    return f"{float(q):.6f}"


def _aligned(rows: list[list[str]]) -> str:
    widths = [max(len(row[c]) for row in rows) for c in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [cell.ljust(w) for cell, w in zip(row, widths)]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def _csv_str(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def lattice_render(
    universe: Universe, bound: int = DEFAULT_ENUMERATION_BOUND
) -> str:
    """Text diagram of the partition lattice: ranks plus covering edges.

    Partitions are grouped by block count, discrete at top and indiscrete
    at bottom; an edge p -> q means q covers p in the refinement order
    (p is finer).
    """
    partitions = enumerate_partitions(universe, bound=bound)
    by_rank: dict[int, list[SetPartition]] = {}
    for p in partitions:
        by_rank.setdefault(len(p.blocks), []).append(p)
    lines = []
    for rank in sorted(by_rank, reverse=True):
        row = sorted(by_rank[rank], key=str)
        lines.append(f"rank {rank}: " + "  ".join(str(p) for p in row))
    # Covering pairs: p strictly finer than q with nothing strictly between.
    edges = []
    for p in partitions:
        for q in partitions:
            if p == q or not refines(p, q):
                continue
            if any(
                r != p and r != q and refines(p, r) and refines(r, q)
                for r in partitions
            ):
                continue
            edges.append((str(p), str(q)))
    lines.append("edges:")
    for fine, coarse in sorted(edges):
        lines.append(f"  {fine} -> {coarse}")
    return "\n".join(lines)


class _Runner:
    def __init__(self, scenario: Scenario, fmt: str, paper_order: bool, bound: int | None):
        self.sc = scenario
        self.fmt = fmt
        self.paper_order = paper_order
        self.bound = bound
        self.chunks: list[str] = []
        self.file_outputs: dict[str, str] = {}

    def emit(self, cmd: Command, text: str) -> None:
        if cmd.destination:
            self.file_outputs[cmd.destination] = text + "\n"
        else:
            self.chunks.append(text)

    def table(self, cmd: Command, title: str, rows: list[list[str]], record: dict) -> None:
        if self.fmt == "csv":
            self.emit(cmd, _csv_str(rows))
        elif self.fmt == "json":
            self.emit(cmd, json.dumps(record, sort_keys=True))
        else:
            self.emit(cmd, title + "\n" + _aligned(rows) if title else _aligned(rows))

    def line(self, cmd: Command, text: str, record: dict) -> None:
        if self.fmt == "json":
            self.emit(cmd, json.dumps(record, sort_keys=True))
        else:
            self.emit(cmd, text)

    def _partition_arg(self, name: str) -> SetPartition:
        if name in self.sc.partitions:
            return self.sc.partitions[name]
        return inverse_image_partition(self.sc.attributes[name])

    def run_command(self, cmd: Command) -> None:
        handler = getattr(self, "_cmd_" + cmd.kind.replace("-", "_"))
        handler(cmd)

    def _cmd_ket_table(self, cmd: Command) -> None:
        bases = [self.sc.resolve_basis(name, cmd.line) for name in cmd.args]
        kwargs = {"paper_order": self.paper_order}
        if self.bound is not None:
            kwargs["bound"] = self.bound
        rows = ket_table(bases, **kwargs)
        header = [
            f"{b.name} = {{{','.join(b.vector_names)}}}" for b in bases
        ]
        cells = [header] + [[str(k) for k in row] for row in rows]
        record = {
            "command": "ket-table",
            "bases": [b.name for b in bases],
            "rows": [[sorted(k.sorted_coords()) for k in row] for row in rows],
        }
        self.table(cmd, "", cells, record)

    def _distribution_rows(self, dist: calculus.OutcomeDistribution):
        rows = [["value", "probability", "decimal", "collapsed"]]
        for o in dist.outcomes:
            rows.append(
                [o.value, _fraction_str(o.probability), _decimal_str(o.probability), str(o.collapsed)]
            )
        return rows

    def _cmd_distribution(self, cmd: Command) -> None:
        state = self.sc.states[cmd.args[0]]
        dist = calculus.born_distribution(state)
        rows = self._distribution_rows(dist)
        record = {
            "command": "distribution",
            "state": cmd.args[0],
            "outcomes": [
                {"value": o.value, "probability": _fraction_str(o.probability),
                 "collapsed": sorted(o.collapsed.to_subset())}
                for o in dist.outcomes
            ],
        }
        self.table(cmd, f"born {cmd.args[0]} = {state}", rows, record)

    def _cmd_measure(self, cmd: Command) -> None:
        attr = self.sc.attributes[cmd.args[0]]
        state = self.sc.states[cmd.args[1]]
        dist = calculus.measure_distribution(attr, state)
        rows = self._distribution_rows(dist)
        record = {
            "command": "measure",
            "attribute": cmd.args[0],
            "state": cmd.args[1],
            "outcomes": [
                {"value": o.value, "probability": _fraction_str(o.probability),
                 "collapsed": sorted(o.collapsed.to_subset())}
                for o in dist.outcomes
            ],
        }
        self.table(cmd, f"measure {cmd.args[0]} {cmd.args[1]} = {state}", rows, record)

    def _cmd_entropy(self, cmd: Command) -> None:
        part = self._partition_arg(cmd.args[0])
        h = up.logical_entropy(part)
        self.line(
            cmd,
            f"entropy {cmd.args[0]} = {_fraction_str(h)} ({_decimal_str(h)})",
            {"command": "entropy", "name": cmd.args[0],
             "entropy": _fraction_str(h), "partition": str(part)},
        )

    def _cmd_join(self, cmd: Command) -> None:
        joined = up.join(self._partition_arg(cmd.args[0]), self._partition_arg(cmd.args[1]))
        self.line(
            cmd,
            f"join {cmd.args[0]} {cmd.args[1]} = {joined}",
            {"command": "join", "operands": list(cmd.args), "partition": str(joined)},
        )

    def _cmd_orbits(self, cmd: Command) -> None:
        group = self.sc.groups[cmd.args[0]]
        part = orbit_partition(group)
        self.line(
            cmd,
            f"orbits {cmd.args[0]} = {part} (order {len(group)})",
            {"command": "orbits", "group": cmd.args[0],
             "partition": str(part), "order": len(group)},
        )

    def _cmd_evolve(self, cmd: Command) -> None:
        m = self.sc.maps[cmd.args[0]]
        state = self.sc.states[cmd.args[1]]
        result = calculus.evolve(m, state)
        self.line(
            cmd,
            f"evolve {cmd.args[0]} {cmd.args[1]} = {result}",
            {"command": "evolve", "map": cmd.args[0], "state": cmd.args[1],
             "result": str(result)},
        )

    def _cmd_cascade(self, cmd: Command) -> None:
        *attr_names, state_name = cmd.args
        attrs = [self.sc.attributes[a] for a in attr_names]
        state = self.sc.states[state_name]
        record = calculus.csca_measure(attrs, state, self.sc.seed)
        lines = [f"cascade {' '.join(attr_names)} from {state_name} (seed {self.sc.seed})"]
        for i, step in enumerate(record.steps):
            lines.append(
                f"step {i}: {step.attribute} -> {step.value}  "
                f"pre={step.pre_state} post={step.post_state} "
                f"p={_fraction_str(step.probability)}"
            )
        lines.append(
            f"final = {record.final_state} tuple=({','.join(record.value_tuple)}) "
            f"p={_fraction_str(record.path_probability)}"
        )
        self.line(
            cmd,
            "\n".join(lines),
            {"command": "cascade", "attributes": attr_names, "state": state_name,
             "seed": self.sc.seed,
             "steps": [
                 {"attribute": s.attribute, "value": s.value,
                  "pre": str(s.pre_state), "post": str(s.post_state),
                  "probability": _fraction_str(s.probability)}
                 for s in record.steps
             ],
             "final": str(record.final_state)},
        )

    def _cmd_lattice(self, cmd: Command) -> None:
        universe = self.sc.universes[cmd.args[0]]
        bound = self.bound if self.bound is not None else DEFAULT_ENUMERATION_BOUND
        text = lattice_render(universe, bound=bound)
        self.line(
            cmd,
            f"lattice {cmd.args[0]}\n{text}",
            {"command": "lattice", "universe": cmd.args[0], "diagram": text},
        )

    def _cmd_pythagoras(self, cmd: Command) -> None:
        part = self._partition_arg(cmd.args[0])
        state = self.sc.states[cmd.args[1]]
        left, right = calculus.pythagoras_check(part, state)
        terms = [len(set(b) & state.to_subset()) for b in part.blocks]
        self.line(
            cmd,
            f"pythagoras {cmd.args[0]} {cmd.args[1]}: "
            f"|S|^2 = {left} = {' + '.join(str(t) for t in terms)} = {right}",
            {"command": "pythagoras", "partition": cmd.args[0],
             "state": cmd.args[1], "left": left, "right": right},
        )


def run_scenario(
    scenario: Scenario,
    fmt: str = "text",
    paper_order: bool = False,
    seed_override: int | None = None,
    bound: int | None = None,
) -> tuple[str, dict[str, str]]:
    """Execute all commands; return (stdout text, {path: file output})."""
    if seed_override is not None:
        scenario.seed = seed_override
    runner = _Runner(scenario, fmt, paper_order, bound)
    for cmd in scenario.commands:
        try:
            runner.run_command(cmd)
        except QmSetsError as exc:
            raise QmSetsError(
                f"line {cmd.line}: {cmd.kind}: {exc}"
            ) from exc
    text = "\n".join(runner.chunks)
    if text:
        text += "\n"
    return text, runner.file_outputs


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qmsets",
        description="Run a scenario file of set-level quantum computations.",
    )
    parser.add_argument("scenario", help="path to a scenario file")
    parser.add_argument("--format", choices=FORMATS, default="text")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the scenario's seed")
    parser.add_argument("--paper-order", action="store_true",
                        help="ket-table rows by descending cardinality, empty set last")
    parser.add_argument("--bound", type=int, default=None,
                        help="override enumeration bounds (lattice, ket-table)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0

    try:
        with open(args.scenario, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"qmsets: {exc}", file=sys.stderr)
        return 1

    try:
        scenario = parse_scenario(text)
    except ScenarioError as exc:
        print(f"qmsets: {exc}", file=sys.stderr)
        return 2

    try:
        output, files = run_scenario(
            scenario,
            fmt=args.format,
            paper_order=args.paper_order,
            seed_override=args.seed,
            bound=args.bound,
        )
    except QmSetsError as exc:
        print(f"qmsets: {exc}", file=sys.stderr)
        return 3

    sys.stdout.write(output)
    for path, content in files.items():
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(content)
        except OSError as exc:
            print(f"qmsets: {exc}", file=sys.stderr)
            return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
