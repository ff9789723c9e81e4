"""Command-line interface.

Exit status: 0 success, 2 code not inductively pierced, 3 verification
failure, 4 bad input.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys

from pierced.code import (
    Code,
    CodeError,
    Interval,
    bit,
    bits,
    canonicalize,
    format_braced,
    format_code,
    mask_from_labels,
    parse_code,
    popcount,
)
from pierced.config import RunConfig, load_config
from pierced.geometry import DimensionTooSmall, Realization, WitnessRegistry, realize
from pierced.ideal import LimitExceeded, canonical_form
from pierced.piercing import (
    NotChordal,
    NotDegreeTwo,
    Pierced,
    compute_piercing_order,
    random_pierced_code,
)
from pierced.render import UnsupportedDimension, render_svg
from pierced.splitting import is_splittable, min_realization_dim
from pierced.structure import RelGraph, chordality
from pierced.verify import verify_all

EXIT_OK = 0
EXIT_NOT_PIERCED = 2
EXIT_VERIFY = 3
EXIT_INPUT = 4


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def _load_code(path: str, cfg: RunConfig, notes: list[str]) -> Code:
    try:
        raw = parse_code(_read(path))
        code, nmap = canonicalize(raw)
    except CodeError as exc:
        raise InputError(f"{path}: {exc}") from exc
    notes.extend(nmap.describe())
    if code.n > cfg.n_cap:
        raise InputError(f"{path}: n={code.n} exceeds the configured cap {cfg.n_cap}")
    return code


def _load_realization(path: str) -> tuple[Realization, WitnessRegistry | None]:
    try:
        doc = json.loads(_read(path))
        r = Realization.from_document(doc)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a realization document ({exc})") from exc
    reg = None
    if "witnesses" in doc:
        reg = WitnessRegistry()
        for w in doc["witnesses"]:
            reg.put(Interval(mask_from_labels(w["sigma"]), mask_from_labels(w["tau"])), w["point"])
    return r, reg


def _chordless_cycle(g: RelGraph) -> list[int] | None:
    """Smallest induced cycle of length at least four, by brute force."""
    verts = list(bits(g.vertices))
    for size in range(4, len(verts) + 1):
        for combo in itertools.combinations(verts, size):
            mask = sum(bit(v) for v in combo)
            if all(popcount(g.neighbors(v) & mask) == 2 for v in combo):
                cycle = [combo[0]]
                prev = None
                while len(cycle) < size:
                    nxt = [u for u in bits(g.neighbors(cycle[-1]) & mask) if u != prev and u not in cycle]
                    if not nxt:
                        break
                    prev = cycle[-1]
                    cycle.append(nxt[0])
                if len(cycle) == size:
                    return cycle
    return None


def _analysis(code: Code, cfg: RunConfig) -> dict:
    verdict = compute_piercing_order(code)
    cf = verdict.cf
    out: dict = {
        "n": code.n,
        "codewords": len(code),
        "canonical_form": [str(f) for f in cf],
        "degree_two": not isinstance(verdict, NotDegreeTwo),
    }
    if isinstance(verdict, NotDegreeTwo):
        f = verdict.witness
        out["pierced"] = False
        out["reason"] = f"canonical form contains {f} (degree {f.degree})"
        return out
    g, p = verdict.graph, verdict.poset
    out["graph_edges"] = [[i + 1, j + 1] for i, j in g.edges()]
    out["poset_covers"] = [[i + 1, j + 1] for i, j in p.covers()]
    chordal = chordality(g)
    out["chordal"] = chordal.chordal
    if isinstance(verdict, NotChordal):
        cycle = _chordless_cycle(g)
        out["pierced"] = False
        if cycle and chordal.chordal is False:
            label = "-".join(str(v + 1) for v in cycle)
            out["reason"] = f"G(C) contains the chordless {len(cycle)}-cycle {label} (not chordal)"
        else:
            out["reason"] = "no neuron is both simplicial in G(C) and minimal in P(C)"
        return out
    split = is_splittable(g, p, verdict.order.cliques)
    out["pierced"] = True
    out["piercing_order"] = [_step_doc(s) for s in verdict.order.piercing_sequence]
    out["k"] = verdict.k
    out["splittable"] = split.splittable
    out["splits"] = [_split_doc(e) for e in split.entries]
    out["min_dim"] = min_realization_dim(verdict, split)
    return out


def _step_doc(s) -> dict:
    return {"neuron": s.neuron + 1, "sigma": [i + 1 for i in bits(s.sigma)], "tau": [i + 1 for i in bits(s.tau)], "rank": s.rank}


def _split_doc(e) -> dict:
    doc = {"clique": [i + 1 for i in bits(e.clique)], "attaching": [i + 1 for i in bits(e.attaching)], "splits": e.splits}
    if e.splits:
        doc["A"] = [i + 1 for i in bits(e.a)]
        doc["B"] = [i + 1 for i in bits(e.b)]
    return doc


def _fmt(labels: list[int]) -> str:
    return "{" + ",".join(map(str, labels)) + "}"


def _analysis_text(a: dict, explain: bool) -> list[str]:
    lines = [f"n={a['n']}, {a['codewords']} codewords"]
    lines.append("canonical form: " + (", ".join(a["canonical_form"]) or "(empty)"))
    lines.append(f"degree two: {'yes' if a['degree_two'] else 'no'}")
    if "graph_edges" in a:
        lines.append("G(C) edges: " + (" ".join(f"{i}-{j}" for i, j in a["graph_edges"]) or "(none)"))
        lines.append("P(C) covers: " + (" ".join(f"{i}<{j}" for i, j in a["poset_covers"]) or "(none)"))
        lines.append(f"chordal: {'yes' if a['chordal'] else 'no'}")
    if not a["pierced"]:
        lines.append(f"not inductively pierced: {a['reason']}")
        return lines
    lines.append("piercing order: " + " ".join(str(s["neuron"]) for s in a["piercing_order"]))
    if explain:
        for s in a["piercing_order"]:
            lines.append(f"  neuron {s['neuron']}: [{_fmt(s['sigma'])}, {_fmt(s['tau'])}] rank {s['rank']}")
    lines.append(f"k: {a['k']}")
    lines.append(f"splittable: {'yes' if a['splittable'] else 'no'}")
    if explain:
        lines.extend("  " + _split_line(s) for s in a["splits"])
    lines.append(f"minimal dimension: {a['min_dim']}")
    return lines


def _split_line(s: dict) -> str:
    head = f"clique {_fmt(s['clique'])}: attaching set {_fmt(s['attaching'])}"
    if not s["splits"]:
        return head + " does not split into two incomparable chains"
    return head + f", partition {_fmt(s['A'])} ⊔ {_fmt(s['B'])}"


def _emit(args, cfg: RunConfig, doc: dict, lines: list[str]) -> None:
    if args.format == "structured":
        doc = dict(doc, config=cfg.as_dict())
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    _write(cfg.output, text)


def _write(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands -----------------------------------------------------------------

def cmd_analyze(args, cfg: RunConfig) -> int:
    notes: list[str] = []
    code = _load_code(args.code, cfg, notes)
    a = _analysis(code, cfg)
    _emit(args, cfg, dict(a, notes=notes), notes + _analysis_text(a, args.explain))
    return EXIT_OK if a["pierced"] else EXIT_NOT_PIERCED


def cmd_piercing_order(args, cfg: RunConfig) -> int:
    notes: list[str] = []
    code = _load_code(args.code, cfg, notes)
    a = _analysis(code, cfg)
    if not a["pierced"]:
        _emit(args, cfg, {"pierced": False, "reason": a["reason"]}, [f"not inductively pierced: {a['reason']}"])
        return EXIT_NOT_PIERCED
    lines = [f"pierce {s['neuron']} along [{_fmt(s['sigma'])}, {_fmt(s['tau'])}] rank {s['rank']}" for s in a["piercing_order"]]
    lines.append(f"k={a['k']}")
    _emit(args, cfg, {"pierced": True, "k": a["k"], "piercing_order": a["piercing_order"]}, lines)
    return EXIT_OK


def cmd_min_dim(args, cfg: RunConfig) -> int:
    notes: list[str] = []
    code = _load_code(args.code, cfg, notes)
    a = _analysis(code, cfg)
    if not a["pierced"]:
        _emit(args, cfg, {"pierced": False, "reason": a["reason"]}, [f"not inductively pierced: {a['reason']}"])
        return EXIT_NOT_PIERCED
    lines = [str(a["min_dim"])]
    if args.explain:
        lines.append(f"k={a['k']}, splittable: {'yes' if a['splittable'] else 'no'}")
        lines.extend(_split_line(s) for s in a["splits"])
    doc = {"min_dim": a["min_dim"], "k": a["k"], "splittable": a["splittable"], "splits": a["splits"]}
    _emit(args, cfg, doc, lines)
    return EXIT_OK


def cmd_realize(args, cfg: RunConfig) -> int:
    notes: list[str] = []
    code = _load_code(args.code, cfg, notes)
    for note in notes:
        print(note, file=sys.stderr)
    verdict = compute_piercing_order(code)
    if not isinstance(verdict, Pierced):
        print("not inductively pierced; no realization exists", file=sys.stderr)
        return EXIT_NOT_PIERCED
    split = is_splittable(verdict.graph, verdict.poset, verdict.order.cliques)
    try:
        r, reg = realize(code, verdict.order, args.dim, split, seed=cfg.seed, g=verdict.graph)
    except DimensionTooSmall as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = verify_all(r, code, verdict.cf, reg, cfg.samples, cfg.seed, cfg.tolerance)
    for line in report.lines(code.n):
        print(line, file=sys.stderr)
    doc = r.to_document(reg.points if args.witnesses else None)
    _write(cfg.output, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_verify(args, cfg: RunConfig) -> int:
    notes: list[str] = []
    code = _load_code(args.code, cfg, notes)
    r, reg = _load_realization(args.realization)
    if len(r.balls) != code.n:
        raise InputError(f"realization has {len(r.balls)} balls but the code has {code.n} neurons")
    cf = canonical_form(code)
    if any(f.degree != 2 for f in cf.elements):
        raise InputError("code is not degree two, so no well-formed ball realization can produce it")
    report = verify_all(r, code, cf, reg, cfg.samples, cfg.seed, cfg.tolerance)
    doc = {
        "ok": report.ok,
        "well_formed": {"ok": report.well_formed.ok, "problems": list(report.well_formed.problems)},
        "witnesses": {
            "ok": report.witnesses.ok,
            "witnessed": len(report.witnesses.witnessed),
            "missing": [[i + 1 for i in bits(w)] for w in report.witnesses.missing],
        },
        "monte_carlo": {
            "ok": report.monte_carlo.ok,
            "samples": report.monte_carlo.samples,
            "coverage": report.monte_carlo.coverage,
            "violations": {format_braced(w): n for w, n in report.monte_carlo.violations.items()},
        },
        "pairwise_relations": {"ok": report.relations.ok, "failures": list(report.relations.failures)},
    }
    _emit(args, cfg, doc, notes + report.lines(code.n) + [f"verdict: {'pass' if report.ok else 'FAIL'}"])
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_render(args, cfg: RunConfig) -> int:
    r, _ = _load_realization(args.realization)
    try:
        svg = render_svg(r)
    except UnsupportedDimension as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write(cfg.output, svg)
    return EXIT_OK


def cmd_random_pierced(args, cfg: RunConfig) -> int:
    if args.n < 1 or args.k < 0:
        raise InputError("need n >= 1 and k >= 0")
    code, order = random_pierced_code(args.n, args.k, cfg.seed)
    if args.format == "structured":
        doc = {"n": code.n, "codewords": code.to_sets()}
        if args.explain:
            doc["piercing_order"] = [_step_doc(s) for s in order.piercing_sequence]
        _write(cfg.output, json.dumps(doc) + "\n")
        return EXIT_OK
    text = format_code(code)
    if args.explain:
        text = "".join(f"# pierce {s.neuron + 1} along {s.interval}\n" for s in order.piercing_sequence) + text
    _write(cfg.output, text)
    return EXIT_OK


# --- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="random seed (unsigned 64-bit)")
    common.add_argument("--samples", type=int, help="Monte Carlo samples for verification")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--explain", action="store_true", help="show intermediate structures")
    common.add_argument("--config", help="JSON config file (default: $PIERCED_CONFIG)")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")

    parser = argparse.ArgumentParser(prog="pierced", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    add("analyze", cmd_analyze, "full recognition report").add_argument("code")
    add("piercing-order", cmd_piercing_order, "print a piercing order").add_argument("code")
    add("min-dim", cmd_min_dim, "minimal well-formed ball realization dimension").add_argument("code")
    sp = add("realize", cmd_realize, "construct and verify a ball realization")
    sp.add_argument("code")
    sp.add_argument("--dim", type=int, help="target dimension (default: minimal)")
    sp.add_argument("--witnesses", action="store_true", help="include registered witness points")
    sp = add("verify", cmd_verify, "check a realization against a code")
    sp.add_argument("realization")
    sp.add_argument("code")
    add("render", cmd_render, "draw a planar realization as SVG").add_argument("realization")
    sp = add("random-pierced", cmd_random_pierced, "generate a random inductively pierced code")
    sp.add_argument("n", type=int)
    sp.add_argument("k", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config).override(seed=args.seed, samples=args.samples, output=args.output)
    except (OSError, ValueError, TypeError) as exc:
        print(f"error: bad configuration: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(cfg.echo(), file=sys.stderr)
    try:
        return args.func(args, cfg)
    except (InputError, LimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
