"""Loaders for the plain-text seed data shipped in coxtorus/data.

Every loader takes an optional directory so the CLI ``--data`` override and
fault-injection tests can point at a modified copy.
"""
from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .exactmath import CycNum, NAMED_CONSTANTS
from .polylaurent import LaurentPoly, PolyError, parse_cycnum, parse_poly


class SeedDataError(ValueError):
    pass


GENERATOR_NAMES = ("w01", "w02", "w03", "w04", "w05", "w06", "w07",
                   "w11", "w12", "w13", "w14", "w15",
                   "w21", "w22", "w23", "w24", "w25", "w3", "s", "t")


def _parse(fn, text, consts):
    try:
        return fn(text, consts)
    except PolyError as exc:
        raise SeedDataError(f"cannot parse {text!r}: {exc}") from exc


def default_data_dir() -> Path:
    return Path(str(resources.files("coxtorus") / "data"))


def _read(name: str, data_dir=None) -> str:
    path = Path(data_dir) / name if data_dir else default_data_dir() / name
    try:
        return path.read_text()
    except OSError as exc:
        raise SeedDataError(f"cannot read seed file {path}: {exc}") from exc


def _lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def _constants(lines, base=None) -> dict[str, CycNum]:
    consts = dict(base or {"z": NAMED_CONSTANTS["z"]})
    for line in lines:
        if line.startswith("const "):
            name, _, expr = line[6:].partition("=")
            consts[name.strip()] = _parse(parse_cycnum, expr.strip(), consts)
    return consts


def _sections(text: str) -> tuple[list[str], dict[str, list[str]]]:
    head: list[str] = []
    secs: dict[str, list[str]] = {}
    cur = None
    for line in _lines(text):
        m = re.fullmatch(r"\[(.+)\]", line)
        if m:
            cur = m.group(1)
            secs[cur] = []
        elif cur is None:
            head.append(line)
        else:
            secs[cur].append(line)
    return head, secs


def _int_rows(expr: str) -> list[list[int]]:
    return [[int(x) for x in row.split()] for row in expr.split("/")]


# ------------------------------------------------------------------ group

def load_group_generators(data_dir=None) -> list[list[list[CycNum]]]:
    head, secs = _sections(_read("group.txt", data_dir))
    consts = _constants(head)
    mats = []
    for name in sorted(secs):
        rows = [[_parse(parse_cycnum, e.strip(), consts) for e in line.split(",")] for line in secs[name]]
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise SeedDataError(f"group generator {name} is not 4x4")
        mats.append(rows)
    return mats


# ------------------------------------------------------------- generators

def load_generators(data_dir=None) -> dict[str, LaurentPoly]:
    lines = list(_lines(_read("generators.txt", data_dir)))
    consts = _constants(lines)
    gens: dict[str, LaurentPoly] = {}
    for line in lines:
        if line.startswith("const "):
            continue
        name, _, expr = line.partition("=")
        gens[name.strip()] = _parse(parse_poly, expr.strip(), consts)
    missing = [g for g in GENERATOR_NAMES if g not in gens]
    if missing:
        raise SeedDataError(f"generators missing from seed data: {missing}")
    return {g: gens[g] for g in GENERATOR_NAMES}


def load_degree_matrix(data_dir=None) -> dict[str, tuple[tuple[int, int], tuple[int, int]]]:
    """name -> (Picard weight, T-weight)."""
    rows = {}
    names = None
    for line in _lines(_read("degree_matrix.txt", data_dir)):
        head, *rest = line.split()
        if head == "names":
            names = rest
        else:
            try:
                rows[head] = [int(x) for x in rest]
            except ValueError as exc:
                raise SeedDataError(f"bad degree-matrix row {head}: {exc}") from exc
    if names is None or set(rows) != {"pic1", "pic2", "tw1", "tw2"}:
        raise SeedDataError("degree matrix needs a names row and rows pic1, pic2, tw1, tw2")
    if any(len(r) != len(names) for r in rows.values()):
        raise SeedDataError("degree matrix rows have inconsistent lengths")
    return {n: ((rows["pic1"][k], rows["pic2"][k]), (rows["tw1"][k], rows["tw2"][k]))
            for k, n in enumerate(names)}


# ------------------------------------------------------------- components

@dataclass
class ComponentSeed:
    name: str
    vanishing: tuple[str, ...]
    equations: list[LaurentPoly] = field(default_factory=list)
    equation_text: list[str] = field(default_factory=list)
    points: dict[str, tuple[int, ...]] = field(default_factory=dict)
    picard: list[list[int]] | None = None
    torus: list[list[int]] | None = None
    kernel: list[list[int]] | None = None
    sigma: list[list[int]] | None = None
    omega: list[list[list[int]]] = field(default_factory=list)

    @property
    def nonvanishing(self) -> tuple[str, ...]:
        return tuple(g for g in GENERATOR_NAMES if g not in self.vanishing)


def load_components(data_dir=None) -> dict[str, ComponentSeed]:
    head, secs = _sections(_read("components.txt", data_dir))
    consts = _constants(head)
    out = {}
    for name, lines in secs.items():
        c = ComponentSeed(name, ())
        for line in lines:
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key == "vanishing":
                c.vanishing = tuple(v.strip() for v in val.split(","))
            elif key == "equation":
                c.equation_text.append(val)
                c.equations.append(_parse(parse_poly, val, consts))
            elif key.startswith("point "):
                c.points[key.split()[1]] = tuple(int(x) for x in val.split())
            elif key in ("picard", "torus", "kernel", "sigma"):
                setattr(c, key, _int_rows(val))
            elif key == "omega":
                c.omega.append(_int_rows(val))
            else:
                raise SeedDataError(f"unknown key {key!r} in component {name}")
        bad = [v for v in c.vanishing if v not in GENERATOR_NAMES]
        if bad:
            raise SeedDataError(f"component {name}: unknown generators {bad}")
        out[name] = c
    return out


# ------------------------------------------------------------------ charts

@dataclass
class ChartSeed:
    name: str
    localize: str
    coordinates: list[str]
    listed: list[str]


def _expand_ranges(expr: str) -> list[str]:
    m = re.search(r"\{(\d+)\.\.(\d+)\}", expr)
    if not m:
        return [expr]
    out = []
    for k in range(int(m.group(1)), int(m.group(2)) + 1):
        out.extend(_expand_ranges(expr[:m.start()] + str(k) + expr[m.end():]))
    return out


def load_charts(data_dir=None) -> list[ChartSeed]:
    _, secs = _sections(_read("charts.txt", data_dir))
    charts = []
    for name, lines in secs.items():
        loc, coords, listed = None, [], []
        for line in lines:
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key == "localize":
                loc = val
            elif key == "coordinate":
                coords.append(val)
            elif key == "listed":
                listed.extend(_expand_ranges(val))
        if loc is None or len(coords) != 4:
            raise SeedDataError(f"chart {name} needs a localizing monomial and four coordinates")
        charts.append(ChartSeed(name, loc, coords, listed))
    return charts


# ------------------------------------------------------- fixed-point tables

def load_compasses(data_dir=None) -> dict[str, dict]:
    out = {}
    for line in _lines(_read("compasses.txt", data_dir)):
        pid, *nums = line.split()
        v = [int(x) for x in nums]
        if len(v) != 10:
            raise SeedDataError(f"compass row {pid} needs 10 integers")
        out[pid] = {"vertex": tuple(v[:2]),
                    "compass": [tuple(v[2 + 2 * k: 4 + 2 * k]) for k in range(4)]}
    return out


def load_mu_table(data_dir=None) -> dict[str, tuple[tuple[int, int], tuple[int, int]]]:
    out = {}
    for line in _lines(_read("mu_table.txt", data_dir)):
        pid, *nums = line.split()
        v = [int(x) for x in nums]
        out[pid] = ((v[0], v[1]), (v[2], v[3]))
    return out


def load_bundles(data_dir=None) -> dict[str, list[tuple[int, int]]]:
    out = {}
    for line in _lines(_read("bundles.txt", data_dir)):
        key, *pairs = line.split()
        out[key] = [tuple(int(x) for x in p.split(",")) for p in pairs]
    return out


def load_diagram(data_dir=None, name: str = "diagram_2_1.csv") -> dict[tuple[int, int], int]:
    text = _read(name, data_dir)
    rows = csv.DictReader(text.splitlines())
    return {(int(r["a"]), int(r["b"])): int(r["dim"]) for r in rows}


def load_expected(data_dir=None) -> dict:
    return json.loads(_read("expected.json", data_dir))
