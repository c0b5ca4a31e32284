"""Command line front end.

One subcommand per module, deterministic output, optional structured
report files.  Exit codes: 0 yes/pass, 1 usage or input error, 2 a
property violation or a definite no, 3 unknown/inconclusive.
"""

import argparse
import json
import sys

from . import rc, stephen, subgroup, zone_graphs
from .boundary import (boundary_width, check_cover_bounds, cover_analysis,
                       lk_generates_pi1, parse_model_file, qi_r1_check)
from .constructions import (MstInput, QTruncation, build_mqw, build_mst,
                            build_q, build_rqw)
from .graphs import export_dot, parse_graph_file, parse_subset_file
from .presentations import parse_presentation, serialize_presentation
from .words import Word, word_from_text

OK, ERR, VIOLATION, UNKNOWN = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(ERR, f"{self.prog}: {message}")


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(ERR, f"cannot read {path}: {exc}") from exc


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(ERR, f"cannot write {path}: {exc}") from exc


def _load_pres(path):
    try:
        return parse_presentation(_read(path))
    except ValueError as exc:
        raise CliError(ERR, f"{path}: {exc}") from exc


def _parse_word(text, alphabet, what="word"):
    try:
        return word_from_text(text, alphabet)
    except ValueError as exc:
        raise CliError(ERR, f"bad {what}: {exc}") from exc


def _csv(text):
    return tuple(tok for tok in text.split(",") if tok)


def _verdict_code(sd):
    return OK if sd.verdict == "yes" else UNKNOWN


# ---------------------------------------------------------------------------
# handlers, one per subcommand; each returns (exit code, report dict)


def _cmd_pres_validate(args):
    p = _load_pres(args.file)
    print(f"{args.file}: {p.kind}, {len(p.alphabet)} generators, "
          f"{len(p.relations)} relations")
    return OK, {"kind": p.kind,
                "generators": list(p.alphabet.base_letters),
                "relations": len(p.relations)}


def _cmd_stephen_run(args):
    p = _load_pres(args.pres)
    base = _parse_word(args.base, p.alphabet, "base word")
    approx = stephen.approximate(p, base, args.rounds, args.cap)
    bad = stephen.check_relator_closure(approx)
    g = approx.graph
    print(f"vertices {g.n} edges {g.edge_count()} rounds "
          f"{approx.rounds_done} stabilized {approx.stabilized}")
    if bad:
        print(f"relator closure fails at {len(bad)} settled vertices")
    if args.dot:
        _write(args.dot, export_dot(g))
    return (VIOLATION if bad else OK,
            {"vertices": g.n, "edges": g.edge_count(),
             "rounds_done": approx.rounds_done,
             "stabilized": approx.stabilized,
             "settled": len(approx.settled),
             "closure_failures": len(bad)})


def _cmd_stephen_member(args):
    p = _load_pres(args.pres)
    w = _parse_word(args.word, p.alphabet)
    sd = stephen.is_right_unit(p, w, args.rounds, args.cap)
    print(f"right unit: {sd.verdict} (rounds {sd.rounds_done}, "
          f"vertices {sd.vertices})")
    return _verdict_code(sd), {"verdict": sd.verdict,
                               "rounds_done": sd.rounds_done,
                               "vertices": sd.vertices,
                               "stabilized": sd.stabilized}


def _cmd_stephen_equal(args):
    p = _load_pres(args.pres)
    u = _parse_word(args.left, p.alphabet, "left word")
    v = _parse_word(args.right, p.alphabet, "right word")
    sd = stephen.equal_right_units(p, u, v, args.rounds, args.cap)
    print(f"equal right units: {sd.verdict} (rounds {sd.rounds_done}, "
          f"vertices {sd.vertices})")
    return _verdict_code(sd), {"verdict": sd.verdict,
                               "rounds_done": sd.rounds_done,
                               "vertices": sd.vertices,
                               "stabilized": sd.stabilized}


def _cmd_rc_solve(args):
    p = _load_pres(args.pres)
    u = _parse_word(args.left, p.alphabet, "left word")
    v = _parse_word(args.right, p.alphabet, "right word")
    result = rc.search_chain(p, u, v, args.max_len, args.max_steps)
    if isinstance(result, rc.RChain):
        print(f"chain of {len(result)} steps found")
        if args.cert:
            _write(args.cert, rc.chain_to_text(result))
        return OK, {"found": True, "steps": len(result)}
    print("no chain found "
          + ("(budget exhausted)" if result.exhausted
             else "(search space closed at this length)"))
    return UNKNOWN, {"found": False, "exhausted": result.exhausted,
                     "words_visited": result.words_visited}


def _cmd_rc_verify(args):
    p = _load_pres(args.pres)
    try:
        chain = rc.chain_from_text(_read(args.cert), p)
    except ValueError as exc:
        raise CliError(ERR, f"{args.cert}: {exc}") from exc
    check = rc.validate_chain(p, chain)
    if check.ok:
        print(f"certificate valid: {len(chain)} steps, "
              f"{str(chain.source)!r} to {str(chain.target)!r}")
        return OK, {"valid": True, "steps": len(chain)}
    print(f"certificate invalid at step {check.step}: {check.message}")
    return VIOLATION, {"valid": False, "step": check.step,
                       "message": check.message}


def _parse_r(text):
    if text.lower() in ("inf", "none", "*"):
        return None
    try:
        r = int(text)
    except ValueError as exc:
        raise CliError(ERR, f"bad block bound {text!r}") from exc
    if r < 0:
        raise CliError(ERR, "block bound must be nonnegative")
    return r


def _cmd_rc_mr(args):
    r = _parse_r(args.r)
    alpha = rc.mr_presentation(0).alphabet
    u = _parse_word(args.left, alpha, "left word")
    v = _parse_word(args.right, alpha, "right word")
    cu, cv = rc.mr_canonical(r, u), rc.mr_canonical(r, v)
    equal = rc.mr_equal(r, u, v)
    print(f"canonical left  {cu}")
    print(f"canonical right {cv}")
    print("equal" if equal else "not equal")
    return (OK if equal else VIOLATION,
            {"equal": equal, "canonical_left": str(cu),
             "canonical_right": str(cv)})


def _cmd_construct(args):
    p = _load_pres(args.infile)
    if args.what in ("mst", "q"):
        inp = MstInput(p, _csv(args.b))
        if args.what == "mst":
            out = build_mst(inp)
        else:
            out = build_q(inp, QTruncation(args.trunc, args.s_max_len,
                                           args.s_max_steps))
    else:
        if not args.w:
            raise CliError(ERR, "--w is required for mqw/rqw")
        wlist = [_parse_word(tok, p.alphabet, "defining word")
                 for tok in args.w.split(",")]
        out = build_mqw(p, wlist) if args.what == "mqw" \
            else build_rqw(p, wlist)
    text = serialize_presentation(out)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    print(f"# {args.what}: {len(out.alphabet)} generators, "
          f"{len(out.relations)} relations", file=sys.stderr)
    return OK, {"what": args.what,
                "generators": list(out.alphabet.base_letters),
                "relations": len(out.relations)}


_OMEGA_CHECKS = {"bidet": "bidet", "relators": "relator_loops",
                 "zones": "zone_partition"}


def _omega_instance(args):
    if args.oracle == "q6":
        return zone_graphs.q6_input(), zone_graphs.q6_oracle()
    if args.oracle == "z2":
        return zone_graphs.z2_input(), zone_graphs.z2_oracle()
    if args.infile is None:
        raise CliError(ERR, "--in is required with --oracle free")
    p = _load_pres(args.infile)
    b = _csv(args.b)
    inp = MstInput(p, b)
    oracle = zone_graphs.SOracle.free_monoid(p.alphabet.base_letters, b)
    return inp, oracle


def _cmd_omega_ball(args):
    inp, oracle = _omega_instance(args)
    checks = []
    for name in _csv(args.check):
        if name not in _OMEGA_CHECKS:
            raise CliError(ERR, f"unknown check {name!r}")
        checks.append(_OMEGA_CHECKS[name])
    ball = zone_graphs.omega_ball(inp, oracle, args.radius,
                                  args.max_vertices)
    rep = zone_graphs.check_omega(ball, tuple(checks))
    print(f"vertices {rep.vertices} edges {rep.edges}")
    print(f"bidet failures {len(rep.bidet_failures)}, relator failures "
          f"{len(rep.relator_failures)} of {rep.relators_checked}, "
          f"unresolved {len(rep.relator_unresolved)}, zone failures "
          f"{len(rep.zone_failures)}")
    if args.dot:
        _write(args.dot, export_dot(ball.graph))
    code = OK if rep.passed else VIOLATION
    if rep.passed and rep.relator_unresolved:
        code = UNKNOWN
    return code, {"vertices": rep.vertices, "edges": rep.edges,
                  "bidet_failures": len(rep.bidet_failures),
                  "relator_failures": len(rep.relator_failures),
                  "relator_unresolved": len(rep.relator_unresolved),
                  "relators_checked": rep.relators_checked,
                  "zone_failures": len(rep.zone_failures)}


def _cmd_gammaprime_check(args):
    if args.infile != "q6":
        raise CliError(ERR, "only the built-in instance 'q6' is supported")
    rep = zone_graphs.q6_gamma_interior_report(args.radius, args.interior)
    print(f"relator walks {rep.relators_checked} (failures "
          f"{len(rep.relator_failures)}, unresolved "
          f"{len(rep.relator_unresolved)}); determinism checks "
          f"{rep.bidet_checked} (failures {len(rep.bidet_failures)})")
    code = OK if rep.passed else VIOLATION
    if rep.passed and rep.relator_unresolved:
        code = UNKNOWN
    return code, {"relators_checked": rep.relators_checked,
                  "relator_failures": len(rep.relator_failures),
                  "relator_unresolved": len(rep.relator_unresolved),
                  "bidet_checked": rep.bidet_checked,
                  "bidet_failures": len(rep.bidet_failures)}


def _load_graph(path):
    try:
        return parse_graph_file(_read(path))
    except ValueError as exc:
        raise CliError(ERR, f"{path}: {exc}") from exc


def _load_subset(path):
    try:
        return parse_subset_file(_read(path))
    except ValueError as exc:
        raise CliError(ERR, f"{path}: {exc}") from exc


def _load_model(path):
    try:
        return parse_model_file(_read(path))
    except ValueError as exc:
        raise CliError(ERR, f"{path}: {exc}") from exc


def _cmd_boundary_width(args):
    g = _load_graph(args.graph)
    subset = _load_subset(args.subset)
    rep = boundary_width(g, subset)
    print(f"width {rep.width} excursion width {rep.excursion_width} "
          f"pairs {len(rep.pairs)}")
    return OK, {"width": rep.width,
                "excursion_width": rep.excursion_width,
                "pairs": len(rep.pairs)}


def _cmd_boundary_cover(args):
    g = _load_graph(args.graph)
    subset = _load_subset(args.subset)
    model = _load_model(args.model) if args.model else None
    rep = check_cover_bounds(g, subset, args.r, model)
    print(f"base width {rep.base_width}, cover width {rep.cover_width}, "
          f"bound {rep.ball_bound}: {'ok' if rep.ball_ok else 'VIOLATED'}")
    if rep.coset_ok is not None:
        print(f"coset union width {rep.coset_width}, bound "
              f"{rep.coset_bound}: {'ok' if rep.coset_ok else 'VIOLATED'}")
    return (OK if rep.ok else VIOLATION,
            {"base_width": rep.base_width, "cover_width": rep.cover_width,
             "ball_bound": rep.ball_bound, "ball_ok": rep.ball_ok,
             "coset_width": rep.coset_width, "coset_bound": rep.coset_bound,
             "coset_ok": rep.coset_ok})


def _cmd_boundary_cosets(args):
    m = _load_model(args.model)
    j_set = tuple(int(tok) for tok in _csv(args.j))
    rep = cover_analysis(m, j_set)
    print(f"union of {len(j_set)} cosets: {len(rep.subset)} vertices, "
          f"connected {rep.connected}, width {rep.width.width}")
    if rep.enlarged is not None and not rep.connected:
        print(f"enlarged to {list(rep.enlarged)}: connected "
              f"{rep.enlarged_connected}")
    ok = rep.connected or rep.enlarged_connected
    return (OK if ok else VIOLATION,
            {"connected": rep.connected, "width": rep.width.width,
             "vertices": len(rep.subset),
             "enlarged": list(rep.enlarged or ()),
             "enlarged_connected": rep.enlarged_connected})


def _cmd_boundary_rips(args):
    g = _load_graph(args.graph)
    try:
        generated = lk_generates_pi1(g, args.base, args.k)
    except ValueError as exc:
        raise CliError(ERR, str(exc)) from exc
    print(f"loops of length <= {args.k} generate: {generated}")
    return OK if generated else VIOLATION, {"generates": generated,
                                            "k": args.k}


def _cmd_qi_check(args):
    p = _load_pres(args.pres)
    rep = qi_r1_check(p, args.rounds, args.radius, args.cap,
                      args.max_pairs, args.seed)
    print(f"lam {rep.lam}, {rep.pairs_checked} interior pairs, "
          f"{len(rep.failures)} failures, exact {rep.exact}")
    return (OK if rep.ok else VIOLATION,
            {"lam": rep.lam, "pairs_checked": rep.pairs_checked,
             "failures": len(rep.failures), "exact": rep.exact,
             "unresolved": rep.unresolved, "seed": args.seed})


def _cmd_subgroup_build(args):
    m = _load_model(args.model)
    j_set = tuple(int(tok) for tok in _csv(args.j)) if args.j else None
    cs = subgroup.build_coset_system(m, j_set)
    y = subgroup.generator_set_Y(cs)
    print(f"cover {list(cs.j_set)}: width {cs.width}, "
          f"{len(cs.boundary)} boundary words, {len(y)} generators")
    _write(args.out, subgroup.write_system_file(cs))
    return OK, {"cover": list(cs.j_set), "width": cs.width,
                "boundary_words": len(cs.boundary), "generators": len(y)}


def _cmd_subgroup_rewrite(args):
    cs = _load_system(args.sys)
    u = _parse_word(args.word, cs.alphabet)
    try:
        symbols = subgroup.rewrite_phi(cs, args.j, u)
        image = subgroup.psi_of(cs, symbols)
    except ValueError as exc:
        print(f"not rewritable: {exc}")
        return UNKNOWN, {"rewritable": False, "reason": str(exc)}
    shown = [[j, str(Word(w, cs.alphabet))] for j, w in symbols]
    print(f"symbols {shown}")
    print(f"represented word {image}")
    return OK, {"symbols": shown, "represented": str(image)}


def _load_system(path):
    try:
        return subgroup.parse_system_file(_read(path))
    except ValueError as exc:
        raise CliError(ERR, f"{path}: {exc}") from exc


def _cmd_subgroup_verify(args):
    cs = _load_system(args.sys)
    rep = subgroup.verify_claims(cs, args.samples, args.seed)
    for name in sorted(rep.counts):
        passed, failed, unknown = rep.counts[name]
        print(f"{name}: {passed} passed, {failed} failed, "
              f"{unknown} unknown")
    total_unknown = sum(c[2] for c in rep.counts.values())
    if rep.failures:
        code = VIOLATION
    elif total_unknown == 3 * rep.samples:
        code = UNKNOWN
    else:
        code = OK
    return code, {"counts": {k: list(v) for k, v in rep.counts.items()},
                  "failures": len(rep.failures), "seed": rep.seed,
                  "samples": rep.samples}


# ---------------------------------------------------------------------------


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json-out", metavar="PATH",
                        help="also write a structured report")

    top = _Parser(prog="invmon")
    sub = top.add_subparsers(dest="command", required=True)

    pres = sub.add_parser("pres", help="presentation files").add_subparsers(
        dest="sub", required=True)
    q = pres.add_parser("validate", parents=[common])
    q.add_argument("file")
    q.set_defaults(handler=_cmd_pres_validate)

    st = sub.add_parser("stephen", help="graph approximation") \
        .add_subparsers(dest="sub", required=True)
    q = st.add_parser("run", parents=[common])
    q.add_argument("--pres", required=True)
    q.add_argument("--base", default="1")
    q.add_argument("--rounds", type=int, default=6)
    q.add_argument("--cap", type=int, default=100000)
    q.add_argument("--dot")
    q.set_defaults(handler=_cmd_stephen_run)
    q = st.add_parser("member", parents=[common])
    q.add_argument("--pres", required=True)
    q.add_argument("--word", required=True)
    q.add_argument("--rounds", type=int, default=6)
    q.add_argument("--cap", type=int, default=100000)
    q.set_defaults(handler=_cmd_stephen_member)
    q = st.add_parser("equal", parents=[common])
    q.add_argument("--pres", required=True)
    q.add_argument("--left", required=True)
    q.add_argument("--right", required=True)
    q.add_argument("--rounds", type=int, default=6)
    q.add_argument("--cap", type=int, default=100000)
    q.set_defaults(handler=_cmd_stephen_equal)

    rcp = sub.add_parser("rc", help="rewriting chains") \
        .add_subparsers(dest="sub", required=True)
    q = rcp.add_parser("solve", parents=[common])
    q.add_argument("--pres", required=True)
    q.add_argument("--left", required=True)
    q.add_argument("--right", required=True)
    q.add_argument("--max-len", type=int, default=12)
    q.add_argument("--max-steps", type=int, default=100000)
    q.add_argument("--cert")
    q.set_defaults(handler=_cmd_rc_solve)
    q = rcp.add_parser("verify", parents=[common])
    q.add_argument("--pres", required=True)
    q.add_argument("--cert", required=True)
    q.set_defaults(handler=_cmd_rc_verify)
    q = rcp.add_parser("mr", parents=[common])
    q.add_argument("--r", required=True)
    q.add_argument("--left", required=True)
    q.add_argument("--right", required=True)
    q.set_defaults(handler=_cmd_rc_mr)

    con = sub.add_parser("construct", help="derived presentations")
    con.add_argument("what", choices=("mst", "q", "mqw", "rqw"))
    con.add_argument("--in", dest="infile", required=True)
    con.add_argument("--b", default="")
    con.add_argument("--w", default="")
    con.add_argument("--trunc", type=int, default=2)
    con.add_argument("--s-max-len", type=int, default=12)
    con.add_argument("--s-max-steps", type=int, default=20000)
    con.add_argument("-o", "--out")
    con.add_argument("--json-out", metavar="PATH")
    con.set_defaults(handler=_cmd_construct)

    om = sub.add_parser("omega", help="limit-graph balls") \
        .add_subparsers(dest="sub", required=True)
    q = om.add_parser("ball", parents=[common])
    q.add_argument("--in", dest="infile")
    q.add_argument("--b", default="")
    q.add_argument("--oracle", required=True, choices=("q6", "z2", "free"))
    q.add_argument("--radius", type=int, required=True)
    q.add_argument("--max-vertices", type=int, default=250000)
    q.add_argument("--check", default="bidet,relators,zones")
    q.add_argument("--dot")
    q.set_defaults(handler=_cmd_omega_ball)

    gp = sub.add_parser("gammaprime", help="surgered Cayley balls") \
        .add_subparsers(dest="sub", required=True)
    q = gp.add_parser("check", parents=[common])
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--radius", type=int, default=8)
    q.add_argument("--interior", type=int, default=6)
    q.set_defaults(handler=_cmd_gammaprime_check)

    bd = sub.add_parser("boundary", help="width and cover analysis") \
        .add_subparsers(dest="sub", required=True)
    q = bd.add_parser("width", parents=[common])
    q.add_argument("--graph", required=True)
    q.add_argument("--subset", required=True)
    q.set_defaults(handler=_cmd_boundary_width)
    q = bd.add_parser("cover", parents=[common])
    q.add_argument("--graph", required=True)
    q.add_argument("--subset", required=True)
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--model")
    q.set_defaults(handler=_cmd_boundary_cover)
    q = bd.add_parser("cosets", parents=[common])
    q.add_argument("--model", required=True)
    q.add_argument("--j", required=True)
    q.set_defaults(handler=_cmd_boundary_cosets)
    q = bd.add_parser("rips", parents=[common])
    q.add_argument("--graph", required=True)
    q.add_argument("--base", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q.set_defaults(handler=_cmd_boundary_rips)

    qi = sub.add_parser("qi", help="metric comparison") \
        .add_subparsers(dest="sub", required=True)
    q = qi.add_parser("check", parents=[common])
    q.add_argument("--pres", required=True)
    q.add_argument("--rounds", type=int, default=6)
    q.add_argument("--radius", type=int, default=4)
    q.add_argument("--cap", type=int, default=100000)
    q.add_argument("--max-pairs", type=int, default=600)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(handler=_cmd_qi_check)

    sg = sub.add_parser("subgroup", help="coset systems") \
        .add_subparsers(dest="sub", required=True)
    q = sg.add_parser("build", parents=[common])
    q.add_argument("--model", required=True)
    q.add_argument("--j", default="")
    q.add_argument("-o", "--out", required=True)
    q.set_defaults(handler=_cmd_subgroup_build)
    q = sg.add_parser("rewrite", parents=[common])
    q.add_argument("--sys", required=True)
    q.add_argument("--j", type=int, required=True)
    q.add_argument("--word", required=True)
    q.set_defaults(handler=_cmd_subgroup_rewrite)
    q = sg.add_parser("verify", parents=[common])
    q.add_argument("--sys", required=True)
    q.add_argument("--samples", type=int, default=50)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(handler=_cmd_subgroup_verify)

    return top


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        code, report = args.handler(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VIOLATION
    report["command"] = " ".join(
        filter(None, (args.command, getattr(args, "sub", None))))
    report.setdefault("seed", None)
    report["exit_code"] = code
    if getattr(args, "json_out", None):
        _write(args.json_out,
               json.dumps(report, sort_keys=True, indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
