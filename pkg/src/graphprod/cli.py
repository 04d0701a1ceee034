"""Command-line front end.

Every subcommand prints a deterministic, line-oriented report.  Exit status
is 0 when everything checked out, 1 when a report contains FAIL lines and 2
on usage or input errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .aut import AutomorphismError, Automorphism, compose, identity as identity_aut, make_generator
from .autpc import (
    Report,
    SilRefusal,
    build_tilde,
    inner_by_vertex_check,
    out_pc_abelian_test,
    verify_injectivity_sample,
    verify_normality,
    verify_phi_well_defined,
)
from .building import (
    Chamber,
    CosetVertex,
    chamber_ball,
    coset_rep,
    link_flag_check,
    poset_ball,
    sigma_action,
    sigma_element,
    verify_class_sizes,
    verify_distance_axiom,
)
from .graph import GraphError, find_sils, is_connected, parse_graph
from .words import WordError, parse_word


class UsageError(Exception):
    pass


# -- report helpers --------------------------------------------------------------------


def _finish(reports: list[Report], out) -> int:
    failed = sum(len(r.violations) for r in reports)
    for r in reports:
        print(r.render(), file=out)
    print("OK" if failed == 0 else f"FAIL {failed}", file=out)
    return 0 if failed == 0 else 1


def _load_graph(args):
    if not args.graph:
        raise UsageError("--graph is required")
    try:
        text = Path(args.graph).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {args.graph}: {e.strerror}") from None
    return parse_graph(text)


def _word(g, args, required=True):
    if args.word is None:
        if required:
            raise UsageError("--word is required")
        return None
    return parse_word(g, args.word)


# -- generator strings -------------------------------------------------------------------


def parse_gen(g, text: str) -> Automorphism:
    """``pc:v:c1,c2`` | ``inner:<word>`` | ``iso:v:k`` | ``sym:a=b,b=a`` | ``tv:v:w[:left|right]``."""
    kind, _, rest = text.partition(":")
    parts = rest.split(":")
    try:
        if kind == "pc" and len(parts) == 2:
            return make_generator(g, "partial_conjugation", parts[0], parts[1].split(","))
        if kind == "inner" and len(parts) == 1:
            return make_generator(g, "inner", parse_word(g, parts[0]))
        if kind == "iso" and len(parts) == 2:
            return make_generator(g, "vertex_iso", parts[0], int(parts[1]))
        if kind == "sym" and len(parts) == 1:
            perm = dict(p.split("=", 1) for p in parts[0].split(",") if p)
            return make_generator(g, "graph_symmetry", perm)
        if kind == "tv" and len(parts) in (2, 3):
            side = parts[2] if len(parts) == 3 else "right"
            return make_generator(g, "transvection", parts[0], parts[1], side)
    except ValueError as e:
        if isinstance(e, (AutomorphismError, GraphError, WordError)):
            raise
        raise UsageError(f"bad generator {text!r}") from None
    raise UsageError(
        f"bad generator {text!r}; expected pc:v:c1,c2 | inner:word | iso:v:k | "
        "sym:a=b,b=a | tv:v:w[:left|right]"
    )


def _parse_perm(text: str | None) -> dict:
    if not text:
        return {}
    try:
        return dict(p.split("=", 1) for p in text.split(",") if p)
    except ValueError:
        raise UsageError(f"bad --perm {text!r}; expected a=b,b=a") from None


def _parse_isos(items: list[str]) -> dict:
    out = {}
    for it in items:
        v, _, k = it.partition(":")
        try:
            out[v] = int(k)
        except ValueError:
            raise UsageError(f"bad --iso {it!r}; expected v:k") from None
    return out


# -- subcommands -----------------------------------------------------------------------


def cmd_nf(args, out) -> int:
    g = _load_graph(args)
    w = _word(g, args)
    print(w, file=out)
    return 0


def cmd_sil(args, out) -> int:
    g = _load_graph(args)
    sils = find_sils(g)
    if not sils:
        print("no SILs found", file=out)
    for s in sils:
        print(f"SIL {s.describe(g)}", file=out)
    return 0


def cmd_tilde(args, out) -> int:
    g = _load_graph(args)
    t = build_tilde(g)
    if args.emit:
        out.write(t.graph.to_text())
        return 0
    tg = t.graph
    print(f"{len(tg)} vertices, {len(tg.edges)} edges, {len(t.non_edges())} non-edges", file=out)
    for name, d in zip(tg.names, t.descriptors):
        print(f"vertex {name} = {d.describe(g)} order {tg.orders[tg.vid(name)] or 'inf'}", file=out)
    for i, j in t.non_edges():
        print(f"non-edge {tg.names[i]} {tg.names[j]}", file=out)
    return 0


def cmd_aut(args, out) -> int:
    g = _load_graph(args)
    if not args.gen:
        raise UsageError("aut needs at least one --gen")
    a = identity_aut(g)
    for text in args.gen:
        a = compose(a, parse_gen(g, text))
    out.write(a.to_text())
    w = _word(g, args, required=False)
    if w is not None:
        print(f"apply {w} -> {a(w)}", file=out)
    return 0


def cmd_verify(args, out) -> int:
    g = _load_graph(args)
    t = build_tilde(g)
    reports = [inner_by_vertex_check(t), verify_phi_well_defined(t)]
    sils = find_sils(g)
    if sils:
        print(f"skipped normality and injectivity: {SilRefusal(g, sils)}", file=out)
    else:
        reports.append(verify_normality(t))
        if args.all:
            reports.append(verify_injectivity_sample(t, args.len, args.exp_bound))
    if args.all:
        if is_connected(g):
            v = out_pc_abelian_test(g, args.inner_radius, args.exp_bound)
            rep = Report("commutators of partial conjugations are inner iff there are no SILs")
            rep.checked = v.checked
            rep.lines.append(f"verdict: {v.describe(g)}")
            if v.reason:
                rep.lines.append(f"reason: {v.reason}")
            rep.lines.append(f"SILs: {len(v.sils)}")
            if not v.consistent:
                rep.violations.append(f"verdict {v.verdict} disagrees with {len(v.sils)} SILs")
            reports.append(rep)
        else:
            print("skipped out_pc test: graph is disconnected", file=out)
    return _finish(reports, out)


def cmd_building(args, out) -> int:
    g = _load_graph(args)
    cb = chamber_ball(g, args.radius, args.exp_bound)
    pb = poset_ball(g, args.radius, args.exp_bound)
    if args.emit:
        out.write(cb.to_text())
        out.write(pb.to_text())
        return 0
    print(
        f"ball radius {args.radius} exponent bound {args.exp_bound}: {len(cb.chambers)} chambers"
        f" ({'closed under generators' if cb.complete else 'truncated'}),"
        f" {len(pb.elements)} poset elements, {len(pb.le_pairs())} strict relations",
        file=out,
    )
    dims: dict[int, int] = {}
    for _, _, d in pb.cubes():
        dims[d] = dims.get(d, 0) + 1
    print("cubes by dimension: " + ", ".join(f"{d}:{n}" for d, n in sorted(dims.items())), file=out)
    reports = [verify_class_sizes(cb), verify_distance_axiom(cb), link_flag_check(pb)]
    return _finish(reports, out)


def cmd_act(args, out) -> int:
    g = _load_graph(args)
    s = sigma_element(g, _parse_perm(args.perm), _parse_isos(args.iso or []))
    w = _word(g, args)
    if args.spherical is None:
        target = Chamber(w)
    else:
        t = g.vids(x for x in args.spherical.split(",") if x)
        target = CosetVertex(coset_rep(g, w, t), t)
    res = sigma_action(s, target)
    src = target.label() if isinstance(target, CosetVertex) else f"{target} K"
    dst = res.label() if isinstance(res, CosetVertex) else f"{res} K"
    print(f"{src} -> {dst}", file=out)
    return 0


def cmd_sweep(args, out) -> int:
    from . import sweeps

    n = args.max_vertices
    if args.kind == "lemma":
        fam = sweeps.graph_family(n, (2, 3), sil=False)
        reports = sweeps.parallel_map(sweeps.lemma_commutation_check, fam, args.jobs)
        return _summarize(f"commutation sweep over {len(fam)} graphs", reports, out)
    if args.kind == "theorem":
        fam = sweeps.graph_family(n, (2, 3), sil=False)
        reports = sweeps.parallel_map(_theorem_job, [(g, args.len, args.exp_bound) for g in fam], args.jobs)
        return _summarize(f"phi sweep over {len(fam)} graphs", [r for rs in reports for r in rs], out)
    if args.kind == "dichotomy":
        fam = sweeps.graph_family(n, (2, 3), sil=None)
        reports = sweeps.parallel_map(
            _dichotomy_job, [(g, args.inner_radius, args.exp_bound) for g in fam], args.jobs
        )
        sil_free = sum(1 for g in fam if not find_sils(g))
        verdicts = [r.lines[0].split(":")[0] for r in reports]
        print(
            f"SIL-free graphs: {sil_free}, abelian-consistent verdicts: {verdicts.count('abelian-consistent')}\n"
            f"SIL graphs: {len(fam) - sil_free}, non-abelian verdicts: {verdicts.count('non-abelian')}\n"
            f"inconclusive verdicts: {verdicts.count('inconclusive')}",
            file=out,
        )
        return _summarize(f"out_pc dichotomy over {len(fam)} graphs", reports, out)
    if args.kind == "disconnected":
        return _finish([sweeps.remark_disconnected_check(n)], out)
    raise UsageError(f"unknown sweep {args.kind!r}")


def _theorem_job(item):
    g, length, e = item
    t = build_tilde(g)
    reps = [verify_phi_well_defined(t), verify_normality(t), verify_injectivity_sample(t, length, e)]
    for r in reps:
        r.title += f" [{_label(g)}]"
    return reps


def _dichotomy_job(item):
    g, radius, e = item
    v = out_pc_abelian_test(g, radius, e)
    rep = Report(f"out_pc dichotomy [{_label(g)}]")
    rep.checked = 1
    rep.lines.append(v.describe(g))
    if not v.consistent:
        rep.violations.append(f"verdict {v.verdict} with {len(v.sils)} SILs ({v.reason})")
    return rep


def _label(g) -> str:
    from .sweeps import _graph_label

    return _graph_label(g)


def _summarize(title: str, reports: list[Report], out) -> int:
    checked = sum(r.checked for r in reports)
    bad = [r for r in reports if not r.ok]
    print(f"== {title}", file=out)
    print(f"{len(reports)} reports, {checked} checks", file=out)
    for r in bad:
        print(r.render(), file=out)
    failed = sum(len(r.violations) for r in bad)
    print("OK" if failed == 0 else f"FAIL {failed}", file=out)
    return 0 if failed == 0 else 1


# -- argument parsing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph file (vertex/edge lines)")
    common.add_argument("--word", help="word such as 'a b^-1 a^2'; '1' is the identity")
    common.add_argument("--radius", type=int, default=3, help="ball radius r (default 3)")
    common.add_argument("--exp-bound", type=int, default=2, help="exponent bound E for infinite vertices")
    common.add_argument("--len", type=int, default=3, help="word length L for injectivity sampling")
    common.add_argument("--inner-radius", type=int, default=4, help="conjugator search radius R")
    common.add_argument("--emit", action="store_true", help="print machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    p = argparse.ArgumentParser(prog="graphprod", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, metavar="subcommand")
    sub.add_parser("nf", parents=[common], help="normal form of --word")
    sub.add_parser("sil", parents=[common], help="list separating intersections of links")
    sub.add_parser("tilde", parents=[common], help="graph of partial conjugations")
    a = sub.add_parser("aut", parents=[common], help="compose generators (first --gen outermost)")
    a.add_argument("--gen", action="append", help="pc:v:c1,c2 | inner:word | iso:v:k | sym:a=b,b=a | tv:v:w[:side]")
    v = sub.add_parser("verify", parents=[common], help="check phi, normality, injectivity, Out^pc")
    v.add_argument("--all", action="store_true", help="include injectivity sampling and the Out^pc test")
    sub.add_parser("building", parents=[common], help="chamber ball, poset and axiom checks")
    act = sub.add_parser("act", parents=[common], help="act by a graph symmetry and vertex isos")
    act.add_argument("--perm", help="graph symmetry as a=b,b=a")
    act.add_argument("--iso", action="append", help="vertex iso v:k (repeatable)")
    act.add_argument("--spherical", help="act on the coset word*G_T for this comma-separated T")
    s = sub.add_parser("sweep", parents=[common], help="exhaustive sweeps over small graphs")
    s.add_argument("kind", choices=["lemma", "theorem", "dichotomy", "disconnected"])
    s.add_argument("--max-vertices", type=int, default=6)
    return p


COMMANDS = {
    "nf": cmd_nf,
    "sil": cmd_sil,
    "tilde": cmd_tilde,
    "aut": cmd_aut,
    "verify": cmd_verify,
    "building": cmd_building,
    "act": cmd_act,
    "sweep": cmd_sweep,
}


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    for flag in ("radius", "len", "inner_radius"):
        if getattr(args, flag) < 0:
            parser.print_usage(sys.stderr)
            print(f"graphprod: error: --{flag.replace('_', '-')} must be >= 0", file=sys.stderr)
            return 2
    for flag in ("exp_bound", "jobs"):
        if getattr(args, flag) < 1:
            parser.print_usage(sys.stderr)
            print(f"graphprod: error: --{flag.replace('_', '-')} must be >= 1", file=sys.stderr)
            return 2
    try:
        return COMMANDS[args.cmd](args, out)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"graphprod: error: {e}", file=sys.stderr)
        return 2
    except (GraphError, WordError, AutomorphismError) as e:
        print(f"graphprod: error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
