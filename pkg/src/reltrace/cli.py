"""Command line interface: ``reltrace <command> <document.json> [options]``.

Exit codes: 0 success, 1 invalid input, 2 computation failure, 3 when
``deformable`` cannot reach a conclusion (the trace is still reported).
"""
import argparse
import sys
import time

from reltrace.complexes import components, validate_pair
from reltrace.covers import ChainMapError, TopCellError, lift_cellular, lift_pair
from reltrace.invariants import (
    ConsistencyError, bounded_conjugacy, consistency_report, deformability_verdict,
    relative_lefschetz, relative_nielsen, relative_reidemeister,
)
from reltrace.io import (
    REPORT_VERSION, DocumentError, InvariantReport, diagnostic_json, load_document,
)

COMMANDS = ("check", "lefschetz", "reidemeister", "nielsen", "deformable", "all")
EXIT_OK, EXIT_INVALID, EXIT_FAILED, EXIT_INCONCLUSIVE = 0, 1, 2, 3


def _key(key):
    return f"{key[0]}{key[1]}"


def _trace_json(t):
    return {
        "value": t.format(),
        "coefficients": {t.shadow.label(c): k for c, k in t.items()},
        "augmentation": t.augmentation(),
    }


def _shadow_json(part):
    d = part.shadow.describe()
    d["abelianized_only"] = not part.exact
    d["twist"] = part.twist
    return d


def parse_tree(text, pair):
    """``"u-v,v-w"`` -> per-component explicit trees for a simplicial pair."""
    index = {str(v): i for i, v in enumerate(pair.names)}
    edges = set()
    for item in filter(None, (s.strip() for s in text.split(","))):
        u, sep, v = item.partition("-")
        if not sep or u not in index or v not in index:
            raise DocumentError(f"--tree: cannot read edge {item!r}")
        e = tuple(sorted((index[u], index[v])))
        if e not in pair.simplices:
            raise DocumentError(f"--tree: {item!r} is not an edge")
        edges.add(e)
    dec = components(pair)
    trees, notes = {}, []
    for j, verts in enumerate(dec.b_components):
        mine = [e for e in edges if e[0] in verts]
        if mine:
            trees[("B", j)] = mine
    for i, verts in enumerate(dec.a_components):
        mine = [e for e in edges if e[0] in verts and e in pair.a_simplices]
        if len(mine) == len(verts) - 1 and _spans(mine, verts):
            trees[("A", i)] = mine
        elif mine:
            notes.append(f"--tree does not restrict to a spanning tree of A{i}; using the BFS tree")
    return trees, notes


def _spans(edges, verts):
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(v) for v in verts}) == 1


def run(command, path, tier=None, tree=None, crosscheck=True,
        bounded=None, timings=False):
    """Evaluate one document; returns (exit code, InvariantReport)."""
    t0 = time.perf_counter()
    clock = {}
    data = {"report_version": REPORT_VERSION, "command": command}
    try:
        doc = load_document(path, tier)
    except (OSError, DocumentError, KeyError, TypeError, ValueError) as exc:
        data["valid"] = False
        data["diagnostics"] = [diagnostic_json(DocumentError(str(exc)))]
        return EXIT_INVALID, InvariantReport(data)
    data["name"] = doc.name
    data["tier"] = doc.tier
    warnings = []
    if doc.tier == "simplicial":
        diags = validate_pair(doc.payload, doc.fmap)
        if doc.fmap is None:
            diags.append(DocumentError("simplicial payload lacks 'vertex_map'"))
    else:
        diags = validate_pair(doc.payload)
    errors = [d for d in diags if getattr(d, "severity", "error") == "error"]
    warnings.extend(str(d) for d in diags if d not in errors)
    data["valid"] = not errors
    data["diagnostics"] = [diagnostic_json(d) for d in errors]
    if errors:
        return EXIT_INVALID, InvariantReport(data)
    clock["validate"] = time.perf_counter() - t0
    if command == "check":
        data["warnings"] = warnings
        return EXIT_OK, InvariantReport(data)
    try:
        t1 = time.perf_counter()
        if doc.tier == "simplicial":
            trees = None
            if tree:
                trees, notes = parse_tree(tree, doc.payload)
                warnings.extend(notes)
            lift = lift_pair(doc.payload, doc.fmap, trees=trees)
        else:
            lift = lift_cellular(doc.payload)
        clock["lift"] = time.perf_counter() - t1
        data["components"] = {
            "tracked": [_key(p.key) for p in lift.parts if p.invariant],
            "not_invariant": [_key(p.key) for p in lift.parts if not p.invariant],
        }
        for p in lift.parts:
            if not p.invariant:
                warnings.append(f"component {_key(p.key)} is not f-invariant and contributes nothing")
        want_lef = command in ("lefschetz", "all")
        want_trace = command in ("reidemeister", "nielsen", "deformable", "all")
        lef = rt = nielsen = None
        if want_lef:
            t1 = time.perf_counter()
            lef = relative_lefschetz(lift, crosscheck=crosscheck)
            clock["lefschetz"] = time.perf_counter() - t1
            data["lefschetz"] = {
                "A": {_key(k): v for k, v in lef.a.items()},
                "B": {_key(k): v for k, v in lef.b.items()},
                "B_absolute": {_key(k): v for k, v in lef.b_absolute.items()},
                "homology_crosscheck": crosscheck,
            }
        if want_trace:
            t1 = time.perf_counter()
            rt = relative_reidemeister(lift)
            clock["reidemeister"] = time.perf_counter() - t1
            data["shadows"] = {_key(p.key): _shadow_json(p) for p in lift.parts if p.invariant}
            data["reidemeister"] = {
                "A": {_key(k): _trace_json(t) for k, t in rt.a_parts.items()},
                "B": {_key(k): _trace_json(t) for k, t in rt.b_parts.items()},
                "B_absolute": {_key(k): _trace_json(t) for k, t in rt.b_absolute.items()},
                "abelianized_shadow": rt.coarsened,
                "zero": rt.is_zero(),
            }
            if rt.coarsened:
                warnings.append("abelianized shadow: a presentation was not recognized as "
                                "abelian, so classes may be coarser than twisted conjugacy")
        if command in ("nielsen", "all"):
            nielsen = relative_nielsen(rt, lift)
            data["nielsen"] = {"N(f|A)": nielsen.n_a, "N(f)": nielsen.n_b,
                               "N(f,f|A)": nielsen.n_b_a, "relative": nielsen.relative}
        verdict = None
        if command in ("deformable", "all"):
            assertions = doc.assertions
            dims = assertions.get("dimensions", {})
            dim_b = int(dims.get("B", lift.dim_b))
            dim_a = int(dims.get("A", lift.dim_a))
            if "dimensions" in assertions and (dim_b, dim_a) != (lift.dim_b, lift.dim_a):
                warnings.append(f"declared dimensions (B={dim_b}, A={dim_a}) differ from the "
                                f"complex (B={lift.dim_b}, A={lift.dim_a}); using the declared ones")
            verdict = deformability_verdict(rt, dim_b, dim_a, assertions)
            data["verdict"] = {"conclusion": verdict.conclusion, "trace_zero": verdict.trace_zero,
                               "hypotheses": verdict.hypotheses, "reasons": verdict.reasons}
        if command == "all":
            report = consistency_report(lef, rt, nielsen)
            data["consistency"] = [{"check": n, "passed": p} for n, p in report.checks]
        if bounded is not None:
            data["experimental_bounded_conjugacy"] = _bounded(lift, bounded)
    except TopCellError as exc:
        data["failure"] = {"module": "covers", "kind": exc.kind, "message": str(exc)}
        data["warnings"] = warnings
        return EXIT_FAILED, InvariantReport(data)
    except (ConsistencyError, ChainMapError) as exc:
        data["failure"] = {"module": "invariants" if isinstance(exc, ConsistencyError) else "covers",
                           "kind": "internal", "message": str(exc)}
        data["warnings"] = warnings
        return EXIT_FAILED, InvariantReport(data)
    except (DocumentError, ValueError) as exc:
        data["valid"] = False
        data["diagnostics"] = [diagnostic_json(exc)]
        return EXIT_INVALID, InvariantReport(data)
    data["warnings"] = warnings
    if timings:
        clock["total"] = time.perf_counter() - t0
        data["timings_seconds"] = {k: round(v, 6) for k, v in clock.items()}
    code = EXIT_OK
    if command == "deformable" and verdict.conclusion not in ("deformable", "not-deformable"):
        code = EXIT_INCONCLUSIVE
    return code, InvariantReport(data)


def _bounded(lift, k):
    out = {"authoritative": False, "max_conjugator_length": k, "components": {}}
    for p in lift.parts:
        if not p.invariant:
            continue
        if lift.tier != "simplicial":
            out["components"][_key(p.key)] = "not available for the cw tier"
            continue
        groups = bounded_conjugacy(p, k)
        out["components"][_key(p.key)] = [
            [{"simplex": p.group.names and "(" + ",".join(str(p.group.names[v]) for v in s) + ")",
              "sign": sign, "word": [[g, e] for g, e in w]} for s, sign, w in grp]
            for grp in groups]
    return out


def build_parser():
    ap = argparse.ArgumentParser(prog="reltrace", description=(
        "Relative Lefschetz numbers, Reidemeister traces and Nielsen numbers "
        "of self-maps of finite pairs."))
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("document", help="JSON input document")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--tier", choices=("simplicial", "cw"), help="override the document tier")
    ap.add_argument("--tree", help="explicit spanning tree as 'u-v,v-w,...' (simplicial tier)")
    ap.add_argument("--no-crosscheck", action="store_true",
                    help="skip the homology-level Lefschetz verification")
    ap.add_argument("--bounded-conjugacy", type=int, metavar="K",
                    help="experimental: merge fixed-point words by free-group twisted "
                         "conjugators of length <= K (not authoritative)")
    ap.add_argument("--timings", action="store_true",
                    help="include wall-clock timings (makes output nondeterministic)")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    code, report = run(args.command, args.document, args.tier, args.tree,
                       not args.no_crosscheck, args.bounded_conjugacy, args.timings)
    out = report.to_json() if args.format == "json" else report.to_text()
    sys.stdout.write(out)
    if code == EXIT_INVALID:
        for d in report.data.get("diagnostics", []):
            sys.stderr.write(f"[{d['module']}] {d['severity']}: {d['message']}\n")
    elif code == EXIT_FAILED:
        f = report.data["failure"]
        sys.stderr.write(f"[{f['module']}] error: {f['message']}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
