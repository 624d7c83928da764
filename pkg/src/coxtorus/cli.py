"""Command-line driver: one subcommand per verification stage."""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable

from . import coxoracle, equivariant, fingroup, gitquot, seeds
from .exactmath import default_primes, transpose
from .latgeom import Cone, LatticeError, complete_fan_from_rays, fan_isomorphism

SUBCOMMANDS = ("group", "central-fibre", "compasses", "charts", "euler", "walls", "oracle", "coxring")
REFERENCE_BUNDLE = (2, 1)
FUNCTIONAL = (3, 2)
SECOND_FUNCTIONAL = (2, 3)
TORIC = ("Z0", "Z1", "Z2")
EXPRESS_DEGREE_CAP = 16
MOLIEN_RANGE = 12
CLOSURE_GRID = 50

# errors raised by the module pipelines count as verification failures
PIPELINE_ERRORS = (gitquot.QuotientError, equivariant.SeriesError, equivariant.CompassError,
                   coxoracle.OracleError, fingroup.GroupError, LatticeError)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    data_dir: Path | None = None
    bound: int = 130
    primes: int = 2
    seed: int = 0
    fmt: str = "text"
    bundle: tuple[int, int] | None = None
    out: Path | None = None

    def validate(self) -> None:
        if self.bound < 1:
            raise ConfigError("--bound must be at least 1")
        if self.primes < 2:
            raise ConfigError("--primes must be at least 2")
        if self.fmt not in ("text", "csv", "json"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.data_dir is not None and not Path(self.data_dir).is_dir():
            raise ConfigError(f"data directory {self.data_dir} does not exist")


@dataclass
class Check:
    tag: str
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"tag": self.tag, "status": "PASS" if self.passed else "FAIL", "detail": self.detail}


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)
    tables: dict[str, dict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, tag: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(tag, bool(passed), detail))


def _fmt(x) -> str:
    if isinstance(x, (set, frozenset)):
        x = sorted(x)
    return json.dumps(x, separators=(",", ":"), default=list)


class Context:
    """Seed data and derived objects shared between subcommands."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.dir = config.data_dir

    @cached_property
    def expected(self) -> dict:
        return seeds.load_expected(self.dir)

    @cached_property
    def degree_matrix(self):
        return seeds.load_degree_matrix(self.dir)

    @cached_property
    def weights(self) -> gitquot.PicWeightTable:
        return gitquot.PicWeightTable.from_degree_matrix(self.degree_matrix)

    @cached_property
    def components(self):
        return seeds.load_components(self.dir)

    @cached_property
    def group(self) -> fingroup.MatGroup:
        return fingroup.enumerate_group(seeds.load_group_generators(self.dir))

    @cached_property
    def compasses(self):
        return seeds.load_compasses(self.dir)

    @cached_property
    def fixed_points(self):
        return equivariant.fixed_point_data(self.compasses, seeds.load_mu_table(self.dir))

    @cached_property
    def bundles(self):
        return seeds.load_bundles(self.dir)

    @cached_property
    def generator_table(self) -> coxoracle.GeneratorTable:
        return coxoracle.GeneratorTable.from_seeds(seeds.load_generators(self.dir), self.degree_matrix)

    @cached_property
    def component_tables(self) -> dict:
        L = REFERENCE_BUNDLE
        tabs = {n: gitquot.component_weight_table(L, gitquot.component_data(self.components[n], self.weights),
                                                  self.weights) for n in TORIC}
        tabs["ZP"] = gitquot.hypersurface_weight_table(L, self.components["ZP"], self.weights)
        return tabs

    def charts(self) -> list[gitquot.ChartData]:
        out = []
        for k, cs in enumerate(seeds.load_charts(self.dir)):
            compass = self.compasses.get(f"P{k + 1}", {}).get("compass")
            out.append(gitquot.build_chart(cs, self.weights, compass))
        return out

    def weight_table(self, L, ell=FUNCTIONAL) -> dict:
        key = ("lrr", tuple(L), tuple(ell), self.config.bound)
        cache = self.__dict__.setdefault("_tables", {})
        if key not in cache:
            cache[key] = equivariant.hilbert_weight_table(L, self.fixed_points, ell, self.config.bound)
        return cache[key]


# ------------------------------------------------------------- stages

def check_group(ctx: Context, rep: Report) -> None:
    s = fingroup.group_summary(ctx.group)
    exp = ctx.expected["group"]
    rep.add("group-order", s["order"] == exp["order"], f"order {s['order']}")
    rep.add("conjugacy-classes", s["classes"] == exp["classes"],
            f"{s['classes']} classes of sizes {s['class_sizes']}")
    rep.add("reflection-classes", s["reflection_classes"] == exp["reflection_classes"],
            f"{s['reflection_classes']} classes of symplectic reflections")
    rep.add("commutator-subgroup", s["commutator_order"] == exp["commutator_order"] and s["commutator_quaternion"],
            f"order {s['commutator_order']}, quaternion {s['commutator_quaternion']}")
    rep.add("abelianization", s["abelianization"] == exp["abelianization"],
            f"invariant factors {s['abelianization']}")
    rep.add("fixed-planes", s["fixed_planes"] == exp["fixed_planes"] and s["planes_transitive"],
            f"{s['fixed_planes']} planes, transitive {s['planes_transitive']}")


def _ray_set(rows) -> set:
    return {tuple(r) for r in rows}


def check_central_fibre(ctx: Context, rep: Report) -> None:
    W, comps, exp = ctx.weights, ctx.components, ctx.expected
    chi = tuple(exp["character"])
    quotients = {}
    for name in TORIC:
        c = gitquot.component_data(comps[name], W)
        e = exp["quotients"][name]
        kw = {"kernel": comps[name].kernel} if comps[name].kernel else {}
        q = gitquot.toric_quotient_pipeline(c, W, chi, reference_tmatrix=e["tmatrix"], **kw)
        quotients[name] = (c, q)
        rays = set(q.fan.rays())
        ok = rays == _ray_set(e["rays"])
        detail = f"rays {_fmt(rays)}"
        if "reference_fan" in e:
            M = fan_isomorphism(q.fan, complete_fan_from_rays(e["reference_fan"]))
            ok = ok and M is not None
            detail += f"; isomorphism to reference fan {_fmt(M)}"
        rep.add(f"quotient-fan-{name}", ok, detail)
        T = transpose(q.tmatrix)
        rep.add(f"torus-matrix-{name}", T == e["tmatrix"], f"T-matrix {_fmt(T)} via change of basis {_fmt(q.align)}")
        omegas = [Cone(w) for w in comps[name].omega]
        nn = gitquot.nonnormal_locus(c, q, omegas)
        want = _ray_set(e["nonnormal"])
        rep.add(f"nonnormal-locus-{name}", nn.nonnormal_rays == want,
                f"non-normal orbit cones {_fmt(nn.nonnormal_images)}, rays {_fmt(nn.nonnormal_rays)}; "
                f"reference rays {_fmt(want)}")
        if nn.omega_consistent is not None:
            rep.add(f"omega-normal-{name}", nn.omega_consistent, "orbits inside omega are normal")
    for item in exp["intersections"]:
        c, q = quotients[item["component"]]
        got = gitquot.intersection_with(c, q, comps[item["other"]])
        want = tuple(sorted(tuple(r) for r in item["cone"]))
        rep.add(f"intersection-{item['component']}-{item['other']}", want in got,
                f"orbit cones {_fmt(got)}, reference {_fmt(want)}")
    zp = gitquot.zp_checks(comps["ZP"], W, exp["zp_weights"])
    for key, tag in (("normal_form_ok", "hypersurface-normal-form"), ("t_weights_ok", "hypersurface-weights"),
                     ("cubic_ok", "hypersurface-cubic"), ("flex_ok", "hypersurface-flex"),
                     ("flex_tangent_ok", "hypersurface-flex-tangent"), ("cusp_ok", "hypersurface-cusp")):
        rep.add(tag, zp[key], {"normal_form_ok": zp["normal_form"], "t_weights_ok": _fmt(zp["t_weights"]),
                               "cubic_ok": zp["cubic"], "flex_ok": "line y=0 meets the cubic in (0:0:1)",
                               "flex_tangent_ok": f"gradient {_fmt(zp['flex_tangent'])}",
                               "cusp_ok": f"singular point {zp['cusp_point']}"}[key])
    # semistability
    charts = [gitquot.build_chart(cs, W) for cs in seeds.load_charts(ctx.dir)]
    cover = gitquot.unstable_cover_check(charts, chi, W)
    bad = [r.name for r in cover["rows"] if not r.semistable]
    rep.add("chart-supports-semistable", cover["passed"], f"unstable: {bad}" if bad else f"{len(charts)} charts")
    products = {gitquot.format_gmono(gitquot.gmono_from_text(p)) for p in exp["unstable_products"]}
    localizers = {gitquot.format_gmono(ch.localize) for ch in charts}
    nonminimal = [r.name for r in cover["rows"] if not r.minimal]
    rep.add("unstable-locus-products", products == localizers and not nonminimal,
            f"chart localizers {sorted(localizers)}; non-minimal {nonminimal}")
    for L, tag in (((1, 0), "L1"), ((1, 1), "L1+L2")):
        fails = [n for n in TORIC
                 if not gitquot.base_locus_on_component(L, quotients[n][0], chi, W)["passed"]]
        rep.add(f"base-locus-{tag}", not fails, f"semistable base faces on {fails}" if fails else "empty on Z0, Z1, Z2")
    tabs = ctx.component_tables
    for n, pts in exp["weight_sets_2_1"].items():
        got, want = set(tabs[n]), _ray_set(pts)
        rep.add(f"weight-set-{n}", got == want, f"{len(got)} weights; missing {_fmt(want - got)}, extra {_fmt(got - want)}")


def check_compasses(ctx: Context, rep: Report) -> None:
    tabs = ctx.component_tables
    for d in ctx.fixed_points:
        known = equivariant.component_tangent_weights(d.vertex, tabs)
        try:
            got = equivariant.assemble_compass(d.id, known)
        except equivariant.CompassError as exc:
            rep.add(f"compass-{d.id}", False, str(exc))
            continue
        rep.add(f"compass-{d.id}", sorted(got) == sorted(d.compass),
                f"vertex {_fmt(d.vertex)} compass {_fmt(sorted(got))}")
        inv = d.invariants()
        rep.add(f"compass-invariants-{d.id}", all(inv.values()), ", ".join(f"{k} {v}" for k, v in sorted(inv.items())))
    hull = equivariant.weight_hull_vertices(tabs)
    want = sorted(tuple(v) for v in ctx.expected["hull_vertices_2_1"])
    rep.add("weight-hull-vertices", sorted(hull) == want, f"vertices {_fmt(sorted(hull))}")


def check_charts(ctx: Context, rep: Report) -> None:
    W = ctx.weights
    ring = gitquot.GeneratorRing(seeds.load_generators(ctx.dir))
    for ch in ctx.charts():
        inv = gitquot.chart_ambient_invariants(ch.localize, W)
        notes = [f"{a} -> {b}" for a, b in ch.corrections]
        bad = []
        for m in inv:
            e = gitquot.express_in_chart_coordinates(m, ch.coordinates, ring, W, max_degree=EXPRESS_DEGREE_CAP)
            if not e.ok:
                bad.append(f"{gitquot.format_gmono(m)}: {e.message}")
        if ch.listed:
            # the list must consist of invariants and generate the rest; an
            # unlisted basis element is accepted when the chart coordinates
            # are listed, since every invariant is expressed in them
            cmp = gitquot.compare_invariant_lists(inv, ch.listed)
            outside = [m for m in cmp["extra"] if not gitquot.monoid_contains(inv, m)]
            coords_listed = all(gitquot.monoid_contains(ch.listed, c) for c in ch.coordinates)
            ok = not outside and (not cmp["missing"] or (coords_listed and not bad))
            rep.add(f"ambient-invariants-{ch.name}", ok,
                    f"{len(inv)} invariants; corrections {notes}; "
                    f"unlisted {[gitquot.format_gmono(m) for m in cmp['missing']]}; "
                    f"listed non-basis products {[gitquot.format_gmono(m) for m in cmp['extra']]}; "
                    f"not invariant {[gitquot.format_gmono(m) for m in outside]}")
        coords = [gitquot.format_gmono(c) for c in ch.coordinates]
        rep.add(f"chart-expressibility-{ch.name}", not bad,
                f"coordinates {coords}; " + (f"failed {bad}" if bad else f"all {len(inv)} invariants expressed"))
        rank = gitquot.chart_jacobian_rank(ch.coordinates, ring, random.Random(f"{ctx.config.seed}:{ch.name}"))
        rep.add(f"chart-jacobian-{ch.name}", rank == 4, f"rank {rank}")


def check_euler(ctx: Context, rep: Report) -> None:
    L = ctx.config.bundle or REFERENCE_BUNDLE
    D = ctx.config.bound
    series = equivariant.lrr_character_series(L, ctx.fixed_points, FUNCTIONAL, D)
    off = series.off_quadrant()
    neg = {e: c for e, c in series.terms.items() if c < 0}
    rep.add("series-quadrant", not off and not neg,
            f"{len(series.terms)} terms; off-quadrant {_fmt(sorted(off)[:5])}, negative {_fmt(sorted(neg)[:5])}")
    if off or neg:
        return
    table = dict(series.terms)
    rep.tables[f"weights-{L[0]}-{L[1]}"] = table
    if tuple(L) == REFERENCE_BUNDLE:
        diagram = seeds.load_diagram(ctx.dir)
        amax, bmax = max(a for a, _ in diagram), max(b for _, b in diagram)
        if max(FUNCTIONAL[0] * a + FUNCTIONAL[1] * b for a, b in diagram) > D:
            rep.add("dimension-diagram", False, f"bound {D} does not cover the diagram box")
        else:
            box = {w: v for w, v in table.items() if w[0] <= amax and w[1] <= bmax}
            diff = sorted(w for w in set(box) | set(diagram) if box.get(w, 0) != diagram.get(w, 0))
            rep.add("dimension-diagram", not diff, f"{len(diagram)} cells in [0,{amax}]x[0,{bmax}]; differ at {_fmt(diff[:5])}")
            anchors = [(a, b, v) for a, b, v in ctx.expected["diagram_anchors_2_1"] if table.get((a, b), 0) != v]
            rep.add("diagram-anchors", not anchors, f"mismatched anchors {_fmt(anchors)}")
    if not equivariant.admissible(SECOND_FUNCTIONAL, ctx.fixed_points):
        rep.add("functional-independence", False, f"{SECOND_FUNCTIONAL} is not admissible")
        return
    other = ctx.weight_table(L, SECOND_FUNCTIONAL)

    def common(t):
        return {w: v for w, v in t.items()
                if FUNCTIONAL[0] * w[0] + FUNCTIONAL[1] * w[1] <= D
                and SECOND_FUNCTIONAL[0] * w[0] + SECOND_FUNCTIONAL[1] * w[1] <= D}
    rep.add("functional-independence", common(table) == common(other),
            f"tables under {FUNCTIONAL} and {SECOND_FUNCTIONAL} agree on the common region")


def check_walls(ctx: Context, rep: Report) -> None:
    walls = equivariant.movable_walls(ctx.fixed_points)
    want = sorted(tuple(w) for w in ctx.expected["walls"])
    rep.add("movable-walls", walls == want, f"walls {_fmt(walls)}")


def check_oracle(ctx: Context, rep: Report) -> None:
    tab = ctx.generator_table
    dm = coxoracle.verify_degree_matrix(tab)
    rep.add("degree-matrix", dm["passed"], "; ".join(dm["mismatches"]) or f"{len(dm['rows'])} generators")
    si = coxoracle.verify_semiinvariance(tab, ctx.group)
    rep.add("semi-invariance", si["passed"], "; ".join(si["failures"][:5]) or
            f"characters by Picard class {_fmt(si['classes'])}")
    L0 = ctx.weight_table((0, 0))
    diff = [(a, b) for a in range(MOLIEN_RANGE + 1) for b in range(MOLIEN_RANGE + 1 - a)
            if coxoracle.invariant_dimension(ctx.group, a, b) != L0.get((a, b), 0)]
    rep.add("invariant-dimensions", not diff,
            f"trace formula against the trivial-bundle table for a+b <= {MOLIEN_RANGE}; differ at {_fmt(diff[:5])}")
    S = ctx.bundles["S"] + ctx.bundles["S'"]
    closure = coxoracle.regularity_closure(S, N=CLOSURE_GRID)
    rep.add("regularity-closure", closure.complete,
            f"{len(closure.covered)} of {(CLOSURE_GRID + 1) ** 2} cells; uncovered {_fmt(closure.uncovered[:5])}")
    nec = coxoracle.seed_necessity(S, N=CLOSURE_GRID)
    loose = [s for s, unc in nec.items() if not unc]
    rep.add("seed-necessity", not loose,
            "; ".join(f"{_fmt(s)} leaves {_fmt(unc[0])}" for s, unc in sorted(nec.items()) if unc)
            + (f"; redundant {_fmt(loose)}" if loose else ""))


def check_coxring(ctx: Context, rep: Report) -> None:
    bundles = [ctx.config.bundle] if ctx.config.bundle else [tuple(L) for L in ctx.bundles["S"]]
    tables = {tuple(L): ctx.weight_table(L) for L in bundles}
    res = coxoracle.cox_equality_verdict(bundles, tables, ctx.generator_table,
                                         primes=default_primes(ctx.config.primes), ell=FUNCTIONAL,
                                         D=ctx.config.bound)
    for L in bundles:
        cells = [c for c in res["cells"] if c.L == tuple(L)]
        bad = [c for c in cells if c.status != "equal"]
        rep.add(f"cox-equality-{L[0]}-{L[1]}", not bad,
                f"{len(cells)} cells at bound {ctx.config.bound}, {len(res['primes'])} primes; "
                + (f"failing {_fmt([(c.weight, c.expected, c.status) for c in bad[:5]])}" if bad else "all equal"))


STAGES: dict[str, Callable[[Context, Report], None]] = {
    "group": check_group, "central-fibre": check_central_fibre, "compasses": check_compasses,
    "charts": check_charts, "euler": check_euler, "walls": check_walls, "oracle": check_oracle,
    "coxring": check_coxring,
}


def run_subcommand(name: str, config: RunConfig, ctx: Context | None = None) -> tuple[int, Report]:
    """Exit code and report: 0 all checks pass, 1 a check fails, 2 bad configuration or data."""
    rep = Report()
    try:
        config.validate()
        if name != "all" and name not in STAGES:
            raise ConfigError(f"unknown subcommand {name!r}")
        ctx = ctx or Context(config)
        for stage in (SUBCOMMANDS if name == "all" else (name,)):
            try:
                STAGES[stage](ctx, rep)
            except PIPELINE_ERRORS as exc:
                rep.add(f"{stage}-pipeline", False, f"{type(exc).__name__}: {exc}")
    except (ConfigError, seeds.SeedDataError, OSError) as exc:
        rep.add("configuration", False, f"{type(exc).__name__}: {exc}")
        return 2, rep
    return (0 if rep.passed else 1), rep


def emit_report(report: Report | list[Check], fmt: str = "text") -> bytes:
    if isinstance(report, list):
        report = Report(report)
    checks = [c.as_dict() for c in report.checks]
    if fmt == "json":
        doc: dict = {"checks": checks}
        if report.tables:
            doc["tables"] = {k: [[a, b, v] for (a, b), v in sorted(t.items())] for k, t in sorted(report.tables.items())}
        return (json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n").encode()
    if fmt == "csv":
        if report.tables:
            return "".join(equivariant.table_to_csv(t) for _, t in sorted(report.tables.items())).encode()
        lines = ["tag,status,detail"]
        for c in checks:
            detail = c["detail"].replace('"', '""')
            lines.append(f'{c["tag"]},{c["status"]},"{detail}"')
        return ("\n".join(lines) + "\n").encode()
    if fmt != "text":
        raise ConfigError(f"unknown format {fmt!r}")
    out = [f"{c['status']} {c['tag']}: {c['detail']}".rstrip(": ") for c in checks]
    for name, t in sorted(report.tables.items()):
        out += ["", name, equivariant.render_grid(t)]
    return ("\n".join(out) + "\n").encode() if out else b""


def _bundle(text: str) -> tuple[int, int]:
    try:
        p, q = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected p,q") from None
    return (p, q)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coxtorus", description="Exact verification of a Cox ring presentation.")
    ap.add_argument("command", choices=SUBCOMMANDS + ("all",))
    ap.add_argument("--bundle", type=_bundle, default=None, help="line bundle p,q (euler, coxring)")
    ap.add_argument("--bound", type=int, default=130, help="truncation bound D for the functional")
    ap.add_argument("--primes", type=int, default=2, help="number of primes for modular ranks")
    ap.add_argument("--seed", type=int, default=0, help="seed for random evaluation points")
    ap.add_argument("--format", dest="fmt", choices=("text", "csv", "json"), default="text")
    ap.add_argument("--data", type=Path, default=None, help="seed-data directory")
    ap.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(args.data, args.bound, args.primes, args.seed, args.fmt, args.bundle, args.out)
    code, rep = run_subcommand(args.command, config)
    payload = emit_report(rep, config.fmt if config.fmt in ("text", "csv", "json") else "text")
    if config.out:
        config.out.write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
