"""Command-line harness: diagram queries, complex dumps, and verify suites.

Reports are byte-stable for a fixed seed and version; --timings adds
wall-clock fields and is therefore excluded from that guarantee.  The
ARTINLAB_WORKERS environment variable sets the worker count for suite
cases; ordering of the emitted report is canonical either way.
"""

from __future__ import annotations

import itertools
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import click

from . import __version__, bihelly, complexes, coxeter, diagram, normalform, poset, taxonomy

VERDICTS = ("pass", "fail", "cap-limited", "gate-failed", "error")
SCHEMA = 1
DEFAULT_SEED = 7
DEFAULT_CAP = 10


def _load_diagram(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise click.ClickException("cannot read %s: %s" % (path, exc))
    try:
        return diagram.parse_diagram(text)
    except (ValueError, KeyError) as exc:
        raise click.ClickException("bad diagram file %s: %s" % (path, exc))


def _emit(data):
    click.echo(json.dumps(data, sort_keys=True, indent=2))


@click.group()
@click.version_option(version=__version__, prog_name="artinlab")
def main():
    """Combinatorial checks for reduction machinery on Coxeter diagrams."""


@main.command()
@click.argument("diagram_file", type=click.Path())
def classify(diagram_file):
    """Name the family of the diagram in DIAGRAM_FILE."""
    d = _load_diagram(diagram_file)
    tag = diagram.classify_family(d)
    abi, abi_witness = diagram.is_ABI(d)
    _emit(
        {
            "kind": tag.kind,
            "params": list(tag.params),
            "names": list(tag.names),
            "family": str(tag),
            "spherical": diagram.is_spherical(d),
            "abi": abi,
            "abi_witness": list(abi_witness) if abi_witness else None,
        }
    )


@main.command()
@click.argument("diagram_file", type=click.Path())
def cores(diagram_file):
    """Grow robust cores from every atomic seed of the diagram."""
    d = _load_diagram(diagram_file)
    elementary = taxonomy.is_ctilde_elementary(d)
    seeds = []
    grown = []
    for kind in ("B-like", "D-like"):
        for s in taxonomy.enumerate_like(d, kind):
            grade = taxonomy.atomicity(d, s)
            entry = {
                "kind": s.kind,
                "vertices": list(s.vertices),
                "base_vertex": s.base_vertex,
                "grade": grade,
            }
            seeds.append(entry)
            if grade != "atomic" or elementary:
                continue
            core = taxonomy.find_robust_core(d, s)
            grown.append(
                {
                    "seed": entry,
                    "core_kind": core.core.kind,
                    "core_vertices": list(core.core.vertices),
                    "config_label": core.config_label,
                    "contains_seed": core.contains_seed,
                    "side_conditions": list(core.side_conditions),
                    "exempt_vertices": list(core.exempt_vertices),
                    "notes": list(core.notes),
                }
            )
    _emit({"elementary": elementary, "seeds": seeds, "cores": grown})


@main.command()
@click.argument("diagram_file", type=click.Path())
def certificate(diagram_file):
    """Emit the reduction certificate for the diagram."""
    d = _load_diagram(diagram_file)
    _emit(taxonomy.reduction_certificate(d))


@main.group(name="complex")
def complex_group():
    """Operations on finite Coxeter complexes."""


def _parse_subdivide(text):
    kind, _, rest = text.partition(":")
    names = tuple(t for t in rest.split(",") if t)
    if kind == "B" and len(names) == 2:
        return kind, names
    if kind == "D" and len(names) == 4:
        return kind, names
    raise click.ClickException(
        "--subdivide wants B:t1,t2 or D:t1,t2,t3,t4, got %r" % (text,)
    )


@complex_group.command()
@click.argument("diagram_file", type=click.Path())
@click.option("--relative", default=None, help="Comma-separated vertex types to keep.")
@click.option(
    "--subdivide",
    default=None,
    help="B:t1,t2 cuts the (t1,t2) edges; D:t1,t2,t3,t4 doubles along the pairs.",
)
def build(diagram_file, relative, subdivide):
    """Build the Coxeter complex of DIAGRAM_FILE and dump it as JSON."""
    d = _load_diagram(diagram_file)
    try:
        g = coxeter.enumerate_group(d)
    except (coxeter.EnumerationCapError, ValueError) as exc:
        raise click.ClickException(str(exc))
    c = complexes.build_coxeter_complex(g)
    try:
        if relative:
            keep = tuple(t for t in relative.split(",") if t)
            c = complexes.relative_complex(c, keep)
        if subdivide:
            kind, names = _parse_subdivide(subdivide)
            if kind == "B":
                sd = complexes.subdivide_B(c, *names)
            else:
                sd = complexes.subdivide_D(c, *names)
            click.echo(sd.to_json())
            return
    except complexes.ComplexError as exc:
        raise click.ClickException(str(exc))
    click.echo(c.to_json())


# -- verify suites -----------------------------------------------------------


def _case(verdict, witness):
    if verdict not in VERDICTS:
        raise ValueError("bad verdict %r" % (verdict,))
    return verdict, witness


def _expect(cond, witness):
    return _case("pass" if cond else "fail", witness)


def _suite_diagram(seed, cap):
    naming = [
        ("F(1,1)", [3, 4, 3], "F4"),
        ("F(1,2)", [3, 4, 3, 3], "F~4"),
        ("H(1,0)", [5, 3], "H3"),
        ("H(2,0)", [5, 3, 3], "H4"),
    ]
    cases = []
    for fixture, labels, expected in naming:
        d = diagram.linear_diagram(labels)

        def run(d=d, expected=expected):
            tag = diagram.classify_family(d)
            return _expect(expected in tag.names, list(tag.names))

        cases.append((fixture, "classify_family", run))

    tripods = [
        ("E(2,2,1)", (2, 2, 1), "E6"),
        ("E(2,1,1)", (2, 1, 1), "D5"),
    ]
    for fixture, arms, expected in tripods:
        vs = ["c"]
        edges = []
        for arm, n in zip("xyz", arms):
            prev = "c"
            for i in range(n):
                v = "%s%d" % (arm, i)
                vs.append(v)
                edges.append((prev, v, 3))
                prev = v
        d = diagram.make_diagram(vs, edges)

        def run(d=d, expected=expected):
            tag = diagram.classify_family(d)
            return _expect(expected in tag.names, list(tag.names))

        cases.append((fixture, "classify_family", run))

    def run_spherical():
        good = all(
            diagram.is_spherical(diagram.linear_diagram(ls))
            for ls in ([3, 3], [3, 4], [5, 3], [3, 4, 3])
        )
        bad = any(
            diagram.is_spherical(diagram.linear_diagram(ls)) for ls in ([4, 4], [3, 6])
        )
        return _expect(good and not bad, "finite vs affine split")

    cases.append(("spherical-panel", "is_spherical", run_spherical))
    return cases


def _labeled_trees(max_n, labels=(3, 4, 5, 6)):
    """Labeled path/star/caterpillar trees up to max_n vertices."""
    shapes = [[("v0", "v1")]]
    for n in range(3, max_n + 1):
        path = [("v%d" % i, "v%d" % (i + 1)) for i in range(n - 1)]
        star = [("v0", "v%d" % i) for i in range(1, n)]
        shapes.append(path)
        if n >= 4:
            shapes.append(star)
        if n >= 5:
            shapes.append(path[: n - 2] + [("v1", "v%d" % (n - 1))])
    for edges in shapes:
        vs = sorted({v for e in edges for v in e})
        for combo in itertools.product(labels, repeat=len(edges)):
            yield diagram.make_diagram(
                vs, [(a, b, m) for (a, b), m in zip(edges, combo)]
            )


def _suite_taxonomy(seed, cap):
    cases = []

    def run_double_route():
        checked = 0
        for d in _labeled_trees(5):
            if taxonomy.is_ctilde_elementary(d) != taxonomy.is_ctilde_elementary_shape(d):
                return _case("fail", diagram.serialize_diagram(d))
            checked += 1
        return _case("pass", "%d trees agree" % checked)

    cases.append(("labeled-trees<=5", "elementary double route", run_double_route))

    def run_core():
        d = diagram.linear_diagram([4, 3, 4])
        seeds = [
            s
            for s in taxonomy.enumerate_like(d, "B-like")
            if taxonomy.atomicity(d, s) == "atomic"
        ]
        labels = {taxonomy.find_robust_core(d, s).config_label for s in seeds}
        return _expect(bool(seeds) and labels == {11}, sorted(labels))

    cases.append(("line-4-3-4", "find_robust_core", run_core))

    certs = [
        ("A3-line", diagram.linear_diagram([3, 3]), "settled"),
        ("B3-line", diagram.linear_diagram([3, 4]), "settled"),
        (
            "D4-tripod",
            diagram.make_diagram(
                ["c", "x", "y", "z"], [("c", "x", 3), ("c", "y", 3), ("c", "z", 3)]
            ),
            "open",
        ),
    ]
    for fixture, d, expected in certs:

        def run(d=d, expected=expected):
            got = taxonomy.reduction_certificate(d)["verdict"]
            return _expect(got == expected, got)

        cases.append((fixture, "reduction_certificate", run))
    return cases


def _suite_coxeter(seed, cap):
    fixtures = [
        ("A2", [3], 6),
        ("A3", [3, 3], 24),
        ("A4", [3, 3, 3], 120),
        ("B3", [3, 4], 48),
        ("B4", [3, 3, 4], 384),
        ("I2(7)", [7], 14),
        ("H3", [5, 3], 120),
        ("F4", [3, 4, 3], 1152),
    ]
    cases = []
    for fixture, labels, want in fixtures:

        def run(labels=labels, want=want):
            got = coxeter.enumerate_group(diagram.linear_diagram(labels)).size
            return _expect(got == want, got)

        cases.append((fixture, "group order", run))

    def run_d4():
        d = diagram.make_diagram(
            ["c", "x", "y", "z"], [("c", "x", 3), ("c", "y", 3), ("c", "z", 3)]
        )
        return _expect(coxeter.enumerate_group(d).size == 192, 192)

    cases.append(("D4", "group order", run_d4))
    return cases


def _a3_complex():
    return complexes.build_coxeter_complex(
        coxeter.enumerate_group(diagram.linear_diagram([3, 3]))
    )


def _suite_complex(seed, cap):
    cases = []

    def run_counts():
        c = _a3_complex()
        return _expect(
            len(c.vertices) == 14 and len(c.chambers) == 24,
            (len(c.vertices), len(c.chambers)),
        )

    cases.append(("A3-sphere", "vertex/chamber counts", run_counts))

    def run_relative_counts():
        c = complexes.relative_complex(_a3_complex(), ("s1", "s3"))
        return _expect(
            len(c.vertices) == 8 and len(c.chambers) == 12,
            (len(c.vertices), len(c.chambers)),
        )

    cases.append(("A3-relative-s1s3", "vertex/chamber counts", run_relative_counts))

    def run_relative_bowtie():
        d = diagram.linear_diagram([3, 3])
        c = _a3_complex()
        for line in (("s1", "s2"), ("s2", "s3"), ("s1", "s2", "s3")):
            r = complexes.relative_complex(c, line)
            for order in (line, line[::-1]):
                oc = complexes.order_relation(r, order, ambient=d)
                if not poset.check(oc.to_poset(), "bowtie_free"):
                    return _case("fail", (line, order))
        return _case("pass", "all lines and orders")

    cases.append(("A3-relative-lines", "bowtie-free posets", run_relative_bowtie))

    def run_subdivision():
        sd = complexes.subdivide_B(_a3_complex(), "s1", "s3")
        c = sd.complex
        return _expect(
            len(c.vertices) == 26 and len(c.chambers) == 48 and len(sd.fake) == 12,
            (len(c.vertices), len(c.chambers), len(sd.fake)),
        )

    cases.append(("A3-as-B-subdivision", "doubling counts", run_subdivision))

    def run_special4():
        c = _a3_complex()
        d = diagram.linear_diagram([3, 3])
        items = complexes.special_cycles(c, d, "special4")
        ok = bool(items) and all(it.center is not None for it in items)
        return _expect(ok, len(items))

    cases.append(("A3-special-4-cycles", "centers exist", run_special4))

    def run_special6():
        d = diagram.linear_diagram([3])
        c = complexes.build_coxeter_complex(coxeter.enumerate_group(d))
        items = complexes.special_cycles(c, d, "special6")
        bad = [it for it in items if it.center is not None]
        return _expect(bool(items) and not bad, len(items))

    cases.append(("A2-hexagon", "no centers (negative control)", run_special6))

    def run_box_battery():
        oc = complexes.order_relation(complexes.chamber_box(3, 3), ("t1", "t2", "t3"))
        rep = complexes.ctilde_hypotheses(oc)
        return _expect(
            rep.ctilde_like and not rep.locally_determined,
            {"ctilde_like": rep.ctilde_like, "locally_determined": rep.locally_determined},
        )

    cases.append(("box-3x3", "hypothesis battery", run_box_battery))
    return cases


def _suite_poset(seed, cap):
    cases = []
    for which in poset.CRITERIA:

        def run(which=which):
            agreed = 0
            for i in range(cap):
                p = poset.generate_poset(seed + i)
                try:
                    rep = poset.criterion(p, which)
                except poset.PosetError:
                    continue
                if not rep.agreement:
                    return _case("fail", {"seed": seed + i, "criterion": which})
                agreed += 1
            return _case("pass", "%d posets agree" % agreed)

        cases.append(("seeded-posets", "criterion %s" % which, run))

    def run_deterministic():
        a = poset.generate_poset(seed).to_json()
        b = poset.generate_poset(seed).to_json()
        return _expect(a == b, "generator is a pure function of the seed")

    cases.append(("generator", "seed determinism", run_deterministic))
    return cases


def _tree_fixtures():
    paths = {
        "path-%d" % n: [("v%d" % i, "v%d" % (i + 1)) for i in range(n - 1)]
        for n in (2, 5, 9)
    }
    fixtures = dict(paths)
    fixtures["star-6"] = [("c", "v%d" % i) for i in range(6)]
    fixtures["caterpillar"] = [
        ("v0", "v1"),
        ("v1", "v2"),
        ("v2", "v3"),
        ("v1", "l0"),
        ("v2", "l1"),
    ]
    fixtures["spider"] = [
        ("c", "a0"),
        ("c", "b0"),
        ("b0", "b1"),
        ("c", "d0"),
        ("d0", "d1"),
        ("d1", "d2"),
    ]
    return fixtures


def _suite_bihelly(seed, cap):
    cases = []
    for name, edges in sorted(_tree_fixtures().items()):

        def run(edges=edges):
            vs = sorted({v for e in edges for v in e})
            rep = bihelly.is_bi_helly(bihelly.BipartiteGraph(vs, edges))
            return _case(
                "cap-limited" if rep.status == "cap-limited" else
                ("pass" if rep.status == "true" else "fail"),
                rep.status,
            )

        cases.append((name, "is_bi_helly", run))

    def run_c6():
        vs = list(range(6))
        rep = bihelly.is_bi_helly(
            bihelly.BipartiteGraph(vs, [(i, (i + 1) % 6) for i in vs])
        )
        return _expect(
            rep.status == "false" and bool(rep.witness), list(rep.witness)
        )

    cases.append(("cycle-6", "bi-Helly fails with witness", run_c6))

    def run_capped():
        vs = list("abcdefgh")
        edges = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("f", "g"), ("g", "h")]
        rep = bihelly.is_bi_helly(bihelly.BipartiteGraph(vs, edges), family_cap=1)
        return _case(
            "cap-limited" if rep.status == "cap-limited" else "fail", rep.status
        )

    cases.append(("path-8 (family_cap=1)", "is_bi_helly", run_capped))

    def run_geodesics():
        oc = complexes.order_relation(complexes.chamber_box(2, 2), ("t1", "t2", "t3"))
        g = complexes.extremal_subgraph(oc)
        count = 0
        for u in g.vertices:
            for v in g.vertices:
                K, K2 = bihelly.near_clique(g, [u]), bihelly.near_clique(g, [v])
                n = bihelly.uniform_distance(g, K, K2)
                if n is None or n < 2:
                    continue
                seq = bihelly.directed_geodesic(g, K, K2)
                rep = bihelly.local_check(g, seq)
                if not rep:
                    return _case("fail", (u, v))
                count += 1
        return _case("pass", "%d singleton pairs" % count)

    cases.append(("box-2x2 corners", "directed geodesics", run_geodesics))
    return cases


def _suite_normalform(seed, cap):
    cases = []

    def run_gate():
        c = _a3_complex()
        oc = complexes.order_relation(c, c.types, ambient=diagram.linear_diagram([3, 3]))
        try:
            normalform.path_classify(oc, [c.vertices[0]])
        except normalform.GateError as exc:
            return _case("gate-failed", str(exc))
        return _case("fail", "sphere complex slipped through the gate")

    cases.append(("A3-sphere", "hypothesis gate", run_gate))

    def box(k):
        return complexes.order_relation(complexes.chamber_box(k, k), ("t1", "t2", "t3"))

    def run_forms():
        oc = box(3)
        c = oc.base
        ext = [v for v in c.vertices if oc.is_extremal(v)]
        pairs = 0
        for x in c.vertices:
            for y in ext:
                if x == y:
                    continue
                w = normalform.compute_normal_form(oc, x, y)
                r = normalform.path_classify(oc, w)
                d = c.distances_from(y)[c.index(x)]
                if not (r.local_normal and r.normal and len(w) == d + 1):
                    return _case("fail", (x, y))
                pairs += 1
        return _expect(pairs == 120, "%d canonical paths" % pairs)

    cases.append(("box-3x3", "normal forms to extremal targets", run_forms))

    def run_round_trip():
        oc = box(2)
        c = oc.base
        ext = [v for v in c.vertices if oc.is_extremal(v)]
        same = differ = 0
        for x in c.vertices:
            for y in ext:
                if x == y:
                    continue
                w = normalform.compute_normal_form(oc, x, y)
                back = normalform.path_from_K(oc, normalform.K_sequence(oc, w))
                if back.vertices == w.vertices:
                    same += 1
                else:
                    differ += 1
        return _expect((same, differ) == (24, 16), {"identity": same, "boundary": differ})

    cases.append(("box-2x2", "fan round-trip split", run_round_trip))

    def run_bestvina():
        oc = box(3)
        c = oc.base
        ext = [v for v in c.vertices if oc.is_extremal(v)]
        checked = 0
        for x in c.vertices:
            for y in ext:
                if x == y or c.adjacent(x, y):
                    continue
                w = normalform.compute_normal_form(oc, x, y)
                for z in ext:
                    if not normalform.bestvina_profile(oc, w, z).unimodal:
                        return _case("fail", (x, y, z))
                    checked += 1
        return _expect(checked == 624, "%d profiles unimodal" % checked)

    cases.append(("box-3x3", "distance profiles unimodal", run_bestvina))

    def run_stars():
        oc = box(3)
        c = oc.base
        for x in (v for v in c.vertices if oc.is_extremal(v)):
            star = normalform.star_subcomplex(c, x, c.types)
            if not normalform.local_convexity(oc, star).locally_convex:
                return _case("fail", x)
        return _case("pass", "all extremal stars locally convex")

    cases.append(("box-3x3", "star convexity", run_stars))

    def run_triple():
        oc = box(3)
        c = oc.base
        ch = c.chambers[len(c.chambers) // 2]
        stars = [normalform.star_subcomplex(c, v, c.types) for v in ch]
        r = normalform.triple_intersection_experiment(oc, *stars)
        return _expect(
            r.triple_nonempty and r.minimum == 0 and r.degenerate,
            {"minimum": r.minimum, "degenerate": r.degenerate},
        )

    cases.append(("box-3x3 chamber stars", "triple intersection", run_triple))
    return cases


SUITES = {
    "diagram": _suite_diagram,
    "taxonomy": _suite_taxonomy,
    "coxeter": _suite_coxeter,
    "complex": _suite_complex,
    "poset": _suite_poset,
    "bihelly": _suite_bihelly,
    "normalform": _suite_normalform,
}


def _run_cases(specs, workers, timings):
    def run_one(spec):
        fixture, operation, fn = spec
        t0 = time.monotonic()
        try:
            verdict, witness = fn()
        except normalform.GateError as exc:
            verdict, witness = "gate-failed", str(exc)
        except Exception as exc:  # noqa: BLE001 - verdicts must absorb anything
            verdict, witness = "error", "%s: %s" % (type(exc).__name__, exc)
        row = {
            "fixture": fixture,
            "operation": operation,
            "verdict": verdict,
            "witness": witness,
        }
        if timings:
            row["wall_ms"] = round((time.monotonic() - t0) * 1000.0, 3)
        return row

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_one, specs))
    else:
        rows = [run_one(s) for s in specs]
    rows.sort(key=lambda r: (r["fixture"], r["operation"]))
    return rows


@main.command()
@click.argument("suite", type=click.Choice(sorted(SUITES) + ["all"]))
@click.option("--seed", default=DEFAULT_SEED, show_default=True, help="Seed for generated fixtures.")
@click.option("--cap", default=DEFAULT_CAP, show_default=True, help="Per-case workload cap where applicable.")
@click.option("--out", default=None, type=click.Path(), help="Also write the JSON report here.")
@click.option("--timings", is_flag=True, help="Record wall time per case (report no longer byte-stable).")
def verify(suite, seed, cap, out, timings):
    """Run a verification suite and report one verdict per case."""
    names = sorted(SUITES) if suite == "all" else [suite]
    workers = max(1, int(os.environ.get("ARTINLAB_WORKERS", "1")))
    specs = []
    for name in names:
        for fixture, operation, fn in SUITES[name](seed, cap):
            specs.append(("%s/%s" % (name, fixture), operation, fn))
    rows = _run_cases(specs, workers, timings)

    summary = {v: 0 for v in VERDICTS}
    for row in rows:
        summary[row["verdict"]] += 1
        click.echo("%-11s %s :: %s" % (row["verdict"], row["fixture"], row["operation"]))
    click.echo(
        "suite %s: %d cases, %s"
        % (suite, len(rows), ", ".join("%d %s" % (summary[v], v) for v in VERDICTS))
    )

    report = {
        "schema": SCHEMA,
        "tool": __version__,
        "suite": suite,
        "seed": seed,
        "cap": cap,
        "cases": rows,
        "summary": summary,
    }
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, sort_keys=True, indent=2, default=str)
            fh.write("\n")
    if summary["fail"] or summary["error"]:
        sys.exit(1)


if __name__ == "__main__":
    main()
