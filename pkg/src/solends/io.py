"""Bit-exact export formats and run configuration.

JSON is the canonical machine format (sorted keys, newline-terminated);
DOT is for human inspection.  Identical inputs always serialize to
identical bytes.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .graphs import Alphabet, LabeledGraph
from .leaves import ClassificationTrace, EndsReport, SampleReport

ENV_OUT_DIR = "SOLENDS_OUT"


class ConfigError(ValueError):
    pass


# -- graph formats -------------------------------------------------------------

def export_graph(G: LabeledGraph, fmt: str = "json") -> str:
    if not G.complete:
        raise ValueError("only complete graphs are exported")
    if fmt == "json":
        payload = {
            "alphabet": list(G.alphabet.labels),
            "basepoint": G.basepoint,
            "edges": {
                lab: [int(x) for x in G.step_array(i + 1)]
                for i, lab in enumerate(G.alphabet.labels)
            },
            "vertex_count": G.n,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ": ")) + "\n"
    if fmt == "dot":
        lines = ["digraph coset_graph {"]
        for v in range(G.n):
            attr = " [shape=doublecircle]" if v == G.basepoint else ""
            lines.append(f"  {v}{attr};")
        for i, lab in enumerate(G.alphabet.labels):
            row = G.step_array(i + 1)
            for v in range(G.n):
                lines.append(f'  {v} -> {int(row[v])} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown graph format {fmt!r} (json, dot)")


def parse_graph_json(text: str) -> LabeledGraph:
    payload = json.loads(text)
    alphabet = Alphabet(tuple(payload["alphabet"]))
    steps = np.array([payload["edges"][lab] for lab in alphabet.labels], dtype=np.int64)
    return LabeledGraph(alphabet, steps, basepoint=payload["basepoint"])


# -- report formats --------------------------------------------------------------

def _report_payload(report) -> dict:
    if isinstance(report, EndsReport):
        return {
            "type": "ends",
            "tower": report.tower,
            "point": report.point,
            "parameters": {
                "r_schedule": list(report.r_schedule),
                "R_factor": report.R_factor,
                "confirm": report.confirm,
            },
            "level": report.level,
            "rows": [asdict(row) for row in report.rows],
            "plateaus": {str(r): v for r, v in report.plateaus.items()},
            "verdict": report.verdict,
        }
    if isinstance(report, ClassificationTrace):
        return {
            "type": "classification",
            "tower": report.tower,
            "point": report.point,
            "budget": report.budget,
            "tags": list(report.tag_names()),
            "verdict": report.verdict,
        }
    if isinstance(report, SampleReport):
        return {
            "type": "sample",
            "tower": report.tower,
            "n": report.n,
            "seed": str(report.seed),
            "budget": report.budget,
            "ends_histogram": report.ends_histogram,
            "classification_histogram": report.class_histogram,
            "points": report.points,
        }
    raise TypeError(f"cannot export {type(report).__name__}")


def export_report(report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(_report_payload(report), sort_keys=True, separators=(",", ": ")) + "\n"
    if fmt == "table":
        return _render_table(report)
    raise ValueError(f"unknown report format {fmt!r} (json, table)")


def _render_table(report) -> str:
    lines: list[str] = []
    if isinstance(report, EndsReport):
        lines.append(f"tower     {report.tower}")
        lines.append(f"point     {report.point}")
        lines.append(f"level     {report.level}  (confirm={report.confirm})")
        lines.append(f"{'r':>6} {'R':>6} {'components':>12} {'touching':>10}")
        for row in report.rows:
            lines.append(f"{row.r:>6} {row.R:>6} {row.count:>12} {row.touching:>10}")
        plate = "  ".join(f"r={r}:{v if v is not None else '-'}" for r, v in report.plateaus.items())
        lines.append(f"plateaus  {plate}")
        lines.append(f"ends      {report.verdict}")
    elif isinstance(report, ClassificationTrace):
        lines.append(f"tower     {report.tower}")
        lines.append(f"point     {report.point}")
        lines.append(f"budget    {report.budget}")
        lines.append(f"{'level':>6}  tag")
        for k, name in enumerate(report.tag_names()):
            lines.append(f"{k:>6}  {name}")
        lines.append(f"verdict   {report.verdict}")
    elif isinstance(report, SampleReport):
        lines.append(f"tower     {report.tower}")
        lines.append(f"samples   {report.n}  seed={report.seed}")
        lines.append("ends histogram:")
        for key, cnt in report.ends_histogram.items():
            lines.append(f"{key:>14} {cnt:>8}")
        lines.append("classification histogram:")
        for key, cnt in report.class_histogram.items():
            lines.append(f"{key:>14} {cnt:>8}")
    else:
        raise TypeError(f"cannot render {type(report).__name__}")
    return "\n".join(lines) + "\n"


# -- run configuration ------------------------------------------------------------

TOWER_NAMES = ("dyadic", "torus", "schori", "rt", "generalized", "mixed")
COMMANDS = ("build", "ends", "classify", "sample", "export")


@dataclass
class RunConfig:
    """Everything one invocation needs; round-trips through JSON unchanged."""

    command: str = "ends"
    tower: str = "schori"
    levels: int = 6
    method: str = "voltage"
    n: int = 1
    variant: str = "4n"
    degrees: tuple[int, ...] | None = None
    policy: str = "id"
    r_schedule: tuple[int, ...] = (2, 4, 8, 16)
    R_factor: int = 4
    confirm: int = 2
    budget: int = 20
    samples: int = 100
    seed: str | None = None
    level: int | None = None
    fmt: str = "table"
    out: str | None = None
    strict: bool = False
    max_level: int | None = None

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; available: {', '.join(COMMANDS)}")
        if self.tower not in TOWER_NAMES:
            raise ConfigError(f"unknown tower {self.tower!r}; available: {', '.join(TOWER_NAMES)}")
        needs_seed = self.command == "sample" or self.policy.startswith("random")
        if needs_seed and not self.seed:
            raise ConfigError("an explicit --seed is required for sampling and random policies")
        if self.command == "sample" and self.samples < 1:
            raise ConfigError("--n must be >= 1")
        return self

    def out_dir(self) -> str:
        return self.out or os.environ.get(ENV_OUT_DIR, ".")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["r_schedule"] = list(self.r_schedule)
        d["degrees"] = list(self.degrees) if self.degrees is not None else None
        return d

    @staticmethod
    def from_dict(d: dict) -> "RunConfig":
        d = dict(d)
        if d.get("r_schedule") is not None:
            d["r_schedule"] = tuple(d["r_schedule"])
        if d.get("degrees") is not None:
            d["degrees"] = tuple(d["degrees"])
        return RunConfig(**d)
