"""``arrowlab`` command-line front end.

Exit status: 0 on success, 1 when a checked property fails, 2 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .consistency import (
    THEOREMS,
    TheoremConfig,
    is_quasi_godelian,
    quasi_flags,
    table_overlap_report,
    valid_profiles,
    verify_theorem,
)
from .errors import ArrowlabError, ParseError
from .lattice import (
    AlternativeSet,
    boolean_algebra,
    check_classical_lemma,
    check_lattice_laws,
    oracle_equivalence,
)
from .social_choice import (
    ProfileSpace,
    audit,
    check_size,
    find_condorcet_witnesses,
    infer_alternatives,
    parse_profile,
    parse_rule,
    preference_lattice,
    profile_space,
)
from .srs import (
    TRIPLE_BUDGET,
    EmbeddableSrs,
    check_embeddable,
    find_diagonaliser,
    find_fixed_points,
    load_system,
    verify_adl,
)
from .srs_instances import (
    Family,
    check_dictator_iff_diagonaliser,
    check_dictator_iff_fixed_point,
    embeddable_omega,
    make_srs,
)

_ASCII = str.maketrans({"≺": "<", "∼": "~", "✓": "yes", "✗": "no", "Υ": "U", "¬": "~", "∧": "&", "ö": "o"})


class Result:
    def __init__(self, payload, text: str, status: int = 0):
        self.payload = payload
        self.text = text
        self.status = status


def _alts(args) -> AlternativeSet:
    if args.alternatives:
        return AlternativeSet(tuple(a.strip() for a in args.alternatives.split(",") if a.strip()))
    return AlternativeSet.default(args.m)


def _space(args) -> ProfileSpace:
    alts = _alts(args)
    check_size(alts.m, args.N, args.allow_large)
    return profile_space(alts, args.N)


def _rule(args, space: ProfileSpace, rule: str | None = None):
    return parse_rule(rule or args.rule, space.alts, space.n)


def _read_input(args):
    if args.input in (None, "-"):
        return sys.stdin.read() if args.input == "-" else None
    with open(args.input) as fh:
        return fh.read()


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON for {what}: {exc.msg}", token=text[max(0, exc.pos - 5):exc.pos + 5],
                         line=exc.lineno) from None


def _profile_arg(args, alts: AlternativeSet | None = None):
    text = args.profile if args.profile is not None else _read_input(args)
    if text is None:
        raise ParseError("a profile is required (--profile or --input)")
    obj = _load_json(text, "profile")
    if isinstance(obj, dict):
        if "alternatives" in obj:
            alts = AlternativeSet(tuple(obj["alternatives"]))
        obj = obj.get("profile")
    if not isinstance(obj, list) or not all(isinstance(c, str) for c in obj):
        raise ParseError("profile must be a list of chains", token=str(obj)[:40])
    alts = alts or infer_alternatives(obj)
    return parse_profile(obj, alts), alts


def _explicit_alts(args) -> AlternativeSet | None:
    return _alts(args) if args.alternatives else None


# -- subcommands -------------------------------------------------------------

def cmd_enumerate(args) -> Result:
    alts = _alts(args)
    check_size(alts.m, args.N or 1, args.allow_large)
    pref = preference_lattice(alts)
    if args.N is None:
        labels = [pref.label(x) for x in range(pref.n_orders)]
        return Result({"m": pref.alts.m, "orders": labels}, "\n".join(labels))
    space = profile_space(pref.alts, args.N)
    rows = [space.chains(x) for x in space.valid_indices]
    return Result({"m": pref.alts.m, "N": args.N, "profiles": rows}, "\n".join(" ".join(r) for r in rows))


def cmd_eval(args) -> Result:
    p, alts = _profile_arg(args, _explicit_alts(args))
    check_size(alts.m, p.n, args.allow_large)
    space = profile_space(alts, p.n)
    w = _rule(args, space)
    out = space.pref.label(w.table[space.index(p)])
    return Result({"rule": w.name, "profile": p.chains(), "out": out}, out)


def cmd_audit(args) -> Result:
    space = _space(args)
    rep = audit(_rule(args, space))
    if args.plot:
        from .plotting import save_figures

        save_figures(args.plot, audit=rep)
    return Result(rep.to_json(), rep.to_text(args.ascii))


def cmd_witness(args) -> Result:
    space = _space(args)
    w = _rule(args, space)
    pair = find_condorcet_witnesses(w)
    if pair is None:
        return Result({"rule": w.name, "witnesses": None}, "no Condorcet witness pair", 1)
    rows = [{"profile": space.chains(x), "out": space.pref.label(w.table[x])} for x in pair]
    bad = [j + 1 for j in range(space.n)
           if space.pref.meet(space.coords[pair[0], j], space.coords[pair[1], j]) == space.pref.cycle]
    text = "\n".join(json.dumps(r["profile"], ensure_ascii=False) + f" -> {r['out']}" for r in rows)
    text += f"\ninconsistent at individual(s) {', '.join(map(str, bad))}"
    return Result({"rule": w.name, "witnesses": rows, "inconsistent_at": bad}, text)


def _srs_report_descriptor(S) -> tuple[dict, int]:
    base = S.base if isinstance(S, EmbeddableSrs) else S
    out = {"name": base.name, "n_expr": base.n_expr, "n_const": base.n_const,
           "fixed_points": {str(e): find_fixed_points(base, e) for e in range(base.n_expr)}}
    status = 0
    if isinstance(S, EmbeddableSrs):
        emb = check_embeddable(base, S.emb, S.comp)
        out["embeddable"] = emb.to_json()
        f = find_diagonaliser(S)
        out["diagonaliser"] = f
        adl = verify_adl(S)
        out["adl"] = adl.to_json()
        if not emb.ok or adl.status == "fail":
            status = 1
    return out, status


def _srs_report_social(args) -> tuple[dict, int]:
    space = _space(args)
    w = _rule(args, space)
    fam = Family.parse(args.family)
    S = make_srs(w, fam, args.i)
    ups = space.indicator(args.i)
    V = space.valid_indices
    fixed = find_fixed_points(S, ups, domain=V)
    out = {"system": S.name, "n_expr": S.n_expr, "n_const": S.n_const,
           "indicator": space.chains(ups),
           "indicator_fixed_points": {"count": len(fixed), "first": [space.chains(x) for x in fixed[:5]]}}
    status = 0
    if fam is Family.PLUS:
        chk = check_dictator_iff_fixed_point(w, args.i)
        out["dictator_iff_fixed_point"] = chk.to_json()
        status |= not chk.agree
    if fam is Family.OMEGA:
        ES = embeddable_omega(w, args.i)
        emb, comp = ES.emb, ES.comp
        ec = check_embeddable(S, emb, comp)
        out["embeddable"] = ec.to_json()
        chk = check_dictator_iff_diagonaliser(w, args.i)
        out["dictator_iff_diagonaliser"] = chk.to_json()
        f_valid = find_diagonaliser(ES, domain=V)
        f_full = find_diagonaliser(ES)
        out["diagonaliser_on_valid"] = None if f_valid is None else space.chains(f_valid)
        out["diagonaliser"] = None if f_full is None else space.chains(f_full)
        if S.n_expr ** 3 <= TRIPLE_BUDGET:
            adl = verify_adl(ES)
            out["adl"] = {"status": adl.status, "failures": len(adl.failures),
                          "helper_star": adl.helper_star, "helper_assoc": adl.helper_assoc,
                          "f_diag": None if adl.f_diag is None else space.chains(adl.f_diag)}
            status |= adl.status == "fail"
        else:
            out["adl"] = {"status": "skipped", "reason": "triple check exceeds budget"}
        status |= (not ec.ok) | (not chk.agree)
    return out, int(status)


def cmd_srs_check(args) -> Result:
    text = _read_input(args)
    if text is not None:
        out, status = _srs_report_descriptor(load_system(_load_json(text, "system")))
    else:
        out, status = _srs_report_social(args)
    lines = []
    for k, v in out.items():
        lines.append(f"{k}: {json.dumps(v, ensure_ascii=False)}")
    return Result(out, "\n".join(lines), status)


def cmd_quasi(args) -> Result:
    if args.profile is not None:
        p, alts = _profile_arg(args, _explicit_alts(args))
        args.N = p.n
        check_size(alts.m, p.n, args.allow_large)
        space = profile_space(alts, p.n)
    else:
        space = _space(args)
        p = None
    w = _rule(args, space)
    S = make_srs(w, args.family, args.i)
    D = valid_profiles(space)
    ups = space.indicator(args.i) if args.upsilon is None else space.parse(_load_json(args.upsilon, "upsilon"))
    yes, d = is_quasi_godelian(S, ups, D)
    out = {"system": S.name, "upsilon": space.chains(ups), "quasi_godelian": yes,
           "witness": None if d is None else space.chains(d)}
    lines = [f"{S.name} with upsilon ({', '.join(space.chains(ups))}): "
             + ("quasi-Godelian" if yes else "not quasi-Godelian")]
    if d is not None:
        lines.append("  witness d = (" + ", ".join(space.chains(d)) + ")")
    if p is not None:
        x = space.index(p)
        if x not in D:
            raise ParseError("quasi flags need a valid profile", token=str(p))
        f = quasi_flags(S, ups, x, D)
        out["profile"] = p.chains()
        out["flags"] = {"quasi_consistent": f.quasi_consistent, "quasi_godel_sentence": f.quasi_godel_sentence,
                        "quasi_complete": f.quasi_complete}
        lines += [f"  {k}: {v}" for k, v in out["flags"].items()]
    return Result(out, "\n".join(lines))


def cmd_table2(args) -> Result:
    space = _space(args)
    w_nodict = _rule(args, space)
    w_dict = _rule(args, space, args.dict_rule or f"projection:{args.i}")
    rep = table_overlap_report(w_nodict, w_dict, args.i)
    if args.plot and not rep.failed_preconditions:
        from .plotting import save_figures

        save_figures(args.plot, pref=space.pref, table2=rep)
    return Result(rep.to_json(), rep.to_text(args.ascii), 0 if rep.ok else 1)


def cmd_selftest(args) -> Result:
    alts = _alts(args)
    check_size(alts.m, 1, args.allow_large)
    pref = preference_lattice(alts)
    results = {"lattice_laws": check_lattice_laws(pref), "oracle_equivalence": oracle_equivalence(pref)}
    boolean = {}
    for k in (1, 2, 3):
        boolean[str(k)] = check_classical_lemma(boolean_algebra(k)).to_json()
    results["classical_lemma_boolean"] = boolean
    results["classical_lemma_pbar"] = check_classical_lemma(pref).to_json()
    ok = not results["lattice_laws"] and not results["oracle_equivalence"] and all(
        b["passed"] for b in boolean.values())
    lines = [f"P-bar m={pref.alts.m}: {pref.size} elements"]
    lines.append("lattice laws: " + ("ok" if not results["lattice_laws"] else "FAILED " + "; ".join(results["lattice_laws"])))
    lines.append("glb/lub oracle: " + ("ok" if not results["oracle_equivalence"] else "FAILED"))
    for k, b in boolean.items():
        lines.append(f"classical lemma, Boolean algebra k={k}: {'ok' if b['passed'] else 'FAILED'}")
    pb = results["classical_lemma_pbar"]
    lines.append("classical lemma on P-bar: " + ("holds" if pb["passed"] else f"fails at {pb['counterexample']}"))
    if args.plot:
        from .plotting import save_figures

        save_figures(args.plot, pref=pref)
    results["pass"] = ok
    return Result(results, "\n".join(lines), 0 if ok else 1)


def cmd_verify(args) -> Result:
    app = None
    text = _read_input(args)
    if text is not None:
        obj = _load_json(text, "app table")
        app = np.asarray(obj["app"] if isinstance(obj, dict) else obj, dtype=np.int64)
    cfg = TheoremConfig(m=args.m, N=args.N, rule=args.rule, i=args.i, mode=args.mode,
                        families=tuple(args.family.split(",")) if args.family else ("omega_i", "^i", "+i"),
                        seed=args.seed, app_table=app, allow_large=args.allow_large)
    if app is not None:
        space = profile_space(AlternativeSet.default(args.m), args.N)
        if app.shape != (space.size, space.pref.size):
            raise ParseError(f"app table has shape {app.shape}, expected {(space.size, space.pref.size)}")
    rep = verify_theorem(args.theorem, cfg)
    return Result(rep.to_json(), rep.to_text(args.ascii), 0 if rep.passed else 1)


COMMANDS = {
    "enumerate": cmd_enumerate,
    "eval": cmd_eval,
    "audit": cmd_audit,
    "witness": cmd_witness,
    "srs-check": cmd_srs_check,
    "quasi": cmd_quasi,
    "table2": cmd_table2,
    "selftest": cmd_selftest,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=3, help="number of alternatives")
    common.add_argument("--N", type=int, default=None, help="number of individuals")
    common.add_argument("--alternatives", help="comma-separated alternative labels")
    common.add_argument("--rule", default="majority",
                        help="majority | borda | projection:i | constant:<chain> | table:<path>")
    common.add_argument("--family", help="+i | ^i | omega_i (verify: comma-separated list)")
    common.add_argument("--i", type=int, default=1, help="individual (1-based)")
    common.add_argument("--profile", help="JSON list of chains, or a profile object")
    common.add_argument("--input", help="input file ('-' for stdin)")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--ascii", action="store_true", help="ASCII fallbacks for glyphs")
    common.add_argument("--allow-large", action="store_true", help="lift the m<=4, N<=4 guard")
    common.add_argument("--plot", metavar="DIR", help="also write PNG figures to DIR")

    parser = argparse.ArgumentParser(prog="arrowlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "table2":
            sp.add_argument("--dict-rule", help="dictatorial rule (default projection:i)")
        if name == "quasi":
            sp.add_argument("--upsilon", help="JSON profile used as the expression (default: indicator)")
        if name == "verify":
            sp.add_argument("--theorem", required=True, choices=THEOREMS)
            sp.add_argument("--mode", choices=("fast", "slow"), default="fast")
            sp.add_argument("--seed", type=int, default=0, help="seed for the random app table")
    return parser


def _defaults(args) -> None:
    if args.command != "enumerate" and args.N is None:
        args.N = 2 if args.command == "verify" and getattr(args, "mode", "") == "slow" else 3
    if args.family is None and args.command != "verify":
        args.family = "omega_i"


def render(res: Result, args) -> str:
    if args.format == "json":
        return json.dumps(res.payload, indent=2, ensure_ascii=args.ascii)
    return res.text.translate(_ASCII) if args.ascii else res.text


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _defaults(args)
    try:
        res = COMMANDS[args.command](args)
    except (ArrowlabError, ValueError, KeyError, OSError) as exc:
        print(f"arrowlab: error: {exc}", file=sys.stderr)
        return 2
    out = render(res, args)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        sys.stdout.write(out + "\n")
    return res.status


if __name__ == "__main__":
    sys.exit(main())
