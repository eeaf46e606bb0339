"""Command-line entry point.

Every command prints a short human answer, or with ``--report`` a
deterministic block of ``key: value`` lines.  Exit status: 0 success or
valid, 1 a countermodel or failed check was found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from .canonical import (
    LatticeError, NAMED, canonical_frame, catalog, load_lattice, named_lattice, verify_embedding,
)
from .fixtures import NAMES as FIXTURES, fixture_text
from .folout import emit_problem, frame_axioms, st_ml2, st_sub, to_fof, universal_closure
from .frame import FrameError, frame_to_text, load_frame, parse_frame_text
from .search import (
    CLASSES, SearchBudget, check_axiom_suite, check_sub_laws, class_conditions, find_countermodel,
    separating_checks,
)
from .semantics import ML2Model, SubModel, UnboundAtomError, entails_ml2, entails_sub, eval_ml2, eval_sub
from .syntax import (
    FImp, ParseError, atoms_of, SortError, Var, depth, parse_fol, parse_ml2, parse_sequent, parse_sub,
    print_formula,
)
from .translate import bullet, circ, verify_faithfulness

EPILOG = """\
substructural formulas:
  atoms p0 p1 ...; constants top bot; binary * (fusion), & , |, -> , <-
  precedence * > & > | > -> = <- ; -> groups to the right, <- to the left,
  the others to the left; a -> b and b <- a may not be mixed unparenthesized
modal formulas (two sorts):
  P0 P1 ... sort 1, Q0 Q1 ... sort 2; top@1 bot@1 top@2 bot@2; ~ & |
  [d] (sort 2 to 1 box), [u] (sort 1 to 2 box), <u> (1 to 2), <d> (2 to 1)
  * , -> , <- on sort 1 (fusion and its residuals)
sequents:
  "<formula> |- <formula>"
frame files:
  frame / X x0 x1 / Y y0 y1 / G x y (gal pair) / R x z w (x R z w) / end
  optional valuation lines before end: val p0 = x0 x1, val P0 = x0, val Q0 = y1
  --frame accepts a path or a bundled name: {fixtures}
lattice files:
  lattice [name] / elems 0 a b 1 / leq a b [c ...] (a <= b <= c ...)
  fuse a b = c / rimp a b = c / limp c b = a (optional, derived if absent) / end
  --named accepts: {named}
exit status:
  0 success or valid, 1 countermodel or failed check, 2 usage or input error
""".format(fixtures=" ".join(FIXTURES), named=" ".join(NAMED))


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Validated command line."""

    command: str
    args: dict = field(default_factory=dict)
    report: bool = False
    seed: int = 0

    @classmethod
    def from_namespace(cls, ns):
        d = dict(vars(ns))
        command = d.pop("command")
        report = d.pop("report", False)
        seed = d.get("seed") or 0
        return cls(command, d, report, seed)


# ---------------------------------------------------------------------------
# argument helpers


def _read_frame(spec):
    if spec is None:
        raise UsageError("--frame is required")
    if os.path.exists(spec):
        return load_frame(spec)
    if spec in FIXTURES:
        return parse_frame_text(fixture_text(spec), name=spec)
    raise UsageError(f"no frame file or bundled frame named {spec!r}")


def _parse_vals(frame, items, sort_prefixes):
    """``--val p0=x0,x1`` style overrides."""
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"--val expects NAME=POINTS, got {item!r}")
        name, pts = item.split("=", 1)
        name = name.strip()
        if not name or name[0] not in sort_prefixes or not name[1:].isdigit():
            raise UsageError(f"bad atom name {name!r} in --val")
        points = [p for p in pts.replace(",", " ").split() if p]
        try:
            mask = frame.mask_y(points) if name[0] == "Q" else frame.mask_x(points)
        except FrameError as exc:
            raise UsageError(str(exc)) from None
        out[(name[0], int(name[1:]))] = mask
    return out


def _sub_model(ff, vals):
    V = dict(ff.sub_val)
    for (p, i), m in _parse_vals(ff.frame, vals, "p").items():
        V[i] = m
    return SubModel(ff.frame, V)


def _ml2_model(ff, vals):
    p, q = dict(ff.p_val), dict(ff.q_val)
    for (s, i), m in _parse_vals(ff.frame, vals, "PQ").items():
        (p if s == "P" else q)[i] = m
    return ML2Model(ff.frame, p, q)


def _budget(a):
    try:
        return SearchBudget(max_x=a["max_x"], max_y=a["max_y"], seed=a["seed"], samples=a["samples"],
                            workers=a["workers"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(out, human, report, as_report):
    lines = report if as_report else human
    for ln in lines:
        print(ln, file=out)


# ---------------------------------------------------------------------------
# commands


def cmd_parse(a, out):
    text = a["text"]
    kind = a["language"]
    if kind == "sub":
        if "|-" in text:
            l, r = parse_sequent(text)
            shown = f"{print_formula(l)} |- {print_formula(r)}"
            rep = ["language: sub", "kind: sequent", f"formula: {shown}"]
        else:
            f = parse_sub(text)
            shown = print_formula(f)
            rep = ["language: sub", "kind: formula", f"formula: {shown}", f"depth: {depth(f)}"]
    elif kind == "ml2":
        if "|-" in text:
            l, r = parse_sequent(text, parser=lambda t: parse_ml2(t)[0])
            if l.sort != r.sort:
                raise SortError("the two sides of a modal sequent must have the same sort")
            shown = f"{print_formula(l)} |- {print_formula(r)}"
            rep = ["language: ml2", "kind: sequent", f"sort: {l.sort}", f"formula: {shown}"]
        else:
            f, s = parse_ml2(text)
            shown = print_formula(f)
            rep = ["language: ml2", "kind: formula", f"sort: {s}", f"formula: {shown}"]
    else:
        f = parse_fol(text)
        shown = print_formula(f)
        rep = ["language: fol", "kind: formula", f"formula: {shown}"]
    return 0, [shown], rep


def cmd_classify(a, out):
    ff = _read_frame(a["frame"])
    fr = ff.frame
    labels = fr.classify()
    shown = " ".join(labels) if labels else "none"
    rep = [f"frame: {fr.name or '-'}", f"size: {fr.nx}x{fr.ny}"]
    for c in ("C1", "C2", "C3", "C4", "C3B"):
        res = fr.check_condition(c)
        tail = "" if res.holds else f" (witness {' '.join(res.witness)})"
        rep.append(f"{c}: {'yes' if res.holds else 'no'}{tail}")
    rep.append(f"stable sets: {len(fr.stable_sets())}")
    rep.append(f"classes: {shown}")
    return 0, [shown], rep


def _show_x(fr, m):
    return "{" + ", ".join(fr.names_x(m)) + "}"


def _show_y(fr, m):
    return "{" + ", ".join(fr.names_y(m)) + "}"


def cmd_eval(a, out):
    ff = _read_frame(a["frame"])
    fr = ff.frame
    if a["ml2"]:
        f, s = parse_ml2(a["formula"])
        m = _ml2_model(ff, a["val"])
        v = eval_ml2(m, f)
        shown = _show_x(fr, v) if s == 1 else _show_y(fr, v)
        rep = [f"formula: {print_formula(f)}", f"sort: {s}", f"denotation: {shown}"]
        return 0, [shown], rep
    f = parse_sub(a["formula"])
    m = _sub_model(ff, a["val"])
    c = eval_sub(m, f)
    rep = [f"formula: {print_formula(f)}", f"extent: {_show_x(fr, c.extent)}",
           f"intent: {_show_y(fr, c.intent)}"]
    return 0, [f"extent {_show_x(fr, c.extent)}", f"intent {_show_y(fr, c.intent)}"], rep


def cmd_entails(a, out):
    ff = _read_frame(a["frame"])
    if a["ml2"]:
        l, r = parse_sequent(a["sequent"], parser=lambda t: parse_ml2(t)[0])
        e = entails_ml2(_ml2_model(ff, a["val"]), l, r)
    else:
        l, r = parse_sequent(a["sequent"])
        e = entails_sub(_sub_model(ff, a["val"]), l, r)
    seq = f"{print_formula(l)} |- {print_formula(r)}"
    rep = [f"sequent: {seq}", f"verdict: {'holds' if e.holds else 'fails'}"]
    if not e.holds:
        rep.append(f"witness: {e.witness}")
    human = ["holds"] if e.holds else [f"fails at {e.witness}"]
    return (0 if e.holds else 1), human, rep


def cmd_translate(a, out):
    f = parse_sub(a["formula"])
    t = bullet(f) if a["mode"] == "bullet" else circ(f)
    shown = print_formula(t)
    rep = [f"formula: {print_formula(f)}", f"mode: {a['mode']}", f"sort: {t.sort}", f"translation: {shown}"]
    return 0, [shown], rep


def cmd_faithful(a, out):
    ff = _read_frame(a["frame"])
    m = _ml2_model(ff, a["val"])
    f = parse_sub(a["formula"])
    missing = sorted(i for i in atoms_of(f) if i not in m.iota1)
    if missing:
        raise UsageError("the interpretation leaves " + ", ".join(f"P{i}" for i in missing)
                         + " unbound (needed for " + ", ".join(f"p{i}" for i in missing) + ")")
    rep = verify_faithfulness(m, f)
    lines = rep.lines()
    return (0 if rep.verdict else 1), lines, lines


def cmd_countermodel(a, out):
    class_conditions(a["cls"])
    budget = _budget(a)
    res = find_countermodel(a["cls"], a["sequent"], budget=budget)
    lines = res.lines()
    if not res.found:
        return 0, lines, lines
    lines.insert(3, f"bound: {budget.summary()}")
    text = res.frame_text()
    if a["out"]:
        with open(a["out"], "w", encoding="utf-8") as fh:
            fh.write(text)
        lines = lines + [f"written: {a['out']}"]
        return 1, lines, lines
    return 1, lines + text.rstrip("\n").splitlines(), lines + ["frame:"] + [
        "  " + ln for ln in text.rstrip("\n").splitlines()]


def cmd_axioms(a, out):
    cls = a["cls"]
    class_conditions(cls)
    budget = _budget(a)
    rep = check_axiom_suite(cls, budget)
    lines = rep.lines()
    ok = rep.passed
    if a["sub_laws"]:
        for law, frames, bad, first in check_sub_laws(cls, budget):
            tail = f" (first on {first})" if first else ""
            lines.append(f"sub law {law}: {'valid' if not bad else 'VIOLATED'} on {frames} frames{tail}")
            ok = ok and not bad
    if a["separating"]:
        for s in separating_checks(budget):
            lines.append(s.line())
            ok = ok and s.found
    if a["sub_laws"] or a["separating"]:
        lines = [ln for ln in lines if not ln.startswith("verdict:")]
        lines.append(f"verdict: {'pass' if ok else 'FAIL'}")
    return (0 if ok else 1), lines, lines


def cmd_canonical(a, out):
    if a["catalog"]:
        n = a["catalog"]
        if n < 2 or n > 4:
            raise UsageError("--catalog takes a size between 2 and 4")
        total = failed = 0
        lines = []
        for L in catalog(n):
            rep = verify_embedding(L)
            total += 1
            if not rep.passed:
                failed += 1
                bad = ", ".join(c.name for c in rep.failures())
                lines.append(f"{L.name}: FAIL ({bad})")
        lines = [f"catalog size: {n}", f"lattices: {total}", f"failed: {failed}"] + lines
        lines.append(f"verdict: {'pass' if not failed else 'FAIL'}")
        return (0 if not failed else 1), lines, lines
    if a["named"]:
        try:
            L = named_lattice(a["named"])
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    elif a["lattice"]:
        if not os.path.exists(a["lattice"]):
            raise UsageError(f"no lattice file {a['lattice']!r}")
        L = load_lattice(a["lattice"])
    else:
        raise UsageError("one of --lattice, --named or --catalog is required")
    cf = canonical_frame(L)
    lines = [f"lattice: {L.name or '-'}", f"elements: {L.n}", f"filters: {len(cf.filters)}",
             f"ideals: {len(cf.ideals)}", f"triples: {len(cf.frame.r111)}",
             f"classes: {' '.join(cf.frame.classify()) or 'none'}"]
    code = 0
    if a["emit_frame"]:
        with open(a["emit_frame"], "w", encoding="utf-8") as fh:
            fh.write(frame_to_text(cf.frame, comment=f"canonical frame of {L.name or 'lattice'}"))
        lines.append(f"written: {a['emit_frame']}")
    if a["verify"]:
        rep = verify_embedding(L)
        lines.append(f"associative: {rep.info['associative']}")
        lines.extend(ln for ln in rep.lines() if ln.split(":")[0] not in rep.info and not ln.startswith("lattice:"))
        code = 0 if rep.passed else 1
    return code, lines, lines


def cmd_export_fol(a, out):
    mode, fmt = a["mode"], a["format"]
    reduce = a["reduce"] or fmt == "fof"
    if fmt == "tff" and a["reduce"]:
        raise UsageError("--reduce produces single-sorted output; use --format fof")
    fmt = fmt or ("fof" if reduce else "tff")
    text = a["formula"]
    if text is None:
        raise UsageError("a formula or sequent is required")
    seq = "|-" in text
    if mode == "ml2":
        if seq:
            l, r = parse_sequent(text, parser=lambda t: parse_ml2(t)[0])
            if l.sort != r.sort:
                raise SortError("the two sides of a modal sequent must have the same sort")
            s = l.sort
        else:
            l, s = parse_ml2(text)
            r = None
        v = Var("x", "x") if s == 1 else Var("y", "y")
        st = lambda g: st_ml2(g, v)  # noqa: E731
    else:
        if seq:
            l, r = parse_sequent(text)
        else:
            l, r = parse_sub(text), None
        if mode == "circ" and r is not None:
            # co-entailment runs the other way
            l, r = r, l
        v = Var("x", "x") if mode == "bullet" else Var("y", "y")
        st = lambda g: st_sub(g, v, mode)  # noqa: E731
    body = st(l) if r is None else FImp(st(l), st(r))
    conj = universal_closure(body)
    entries = []
    if a["include_frame_axioms"]:
        conds = class_conditions(a["cls"]) if a["cls"] else ()
        for name, ax in frame_axioms(conds):
            entries.append((name, "axiom", to_fof(ax) if fmt == "fof" else ax))
    entries.append(("goal", "conjecture", to_fof(conj) if fmt == "fof" else conj))
    header = f"{mode} translation of {text.strip()}"
    if a["cls"]:
        header += f"\nframe class {a['cls']}"
    problem = emit_problem(entries, fmt, header)
    if a["out"]:
        with open(a["out"], "w", encoding="utf-8") as fh:
            fh.write(problem)
        lines = [f"format: {fmt}", f"formulas: {len(entries)}", f"written: {a['out']}"]
        return 0, lines, lines
    body = problem.rstrip("\n").splitlines()
    return 0, body, body


COMMANDS = {
    "parse": cmd_parse,
    "classify": cmd_classify,
    "eval": cmd_eval,
    "entails": cmd_entails,
    "translate": cmd_translate,
    "faithful": cmd_faithful,
    "countermodel": cmd_countermodel,
    "axioms": cmd_axioms,
    "canonical": cmd_canonical,
    "export-fol": cmd_export_fol,
}


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _search_args(p, max_default=2):
    p.add_argument("--class", dest="cls", default="nfl", choices=CLASSES)
    p.add_argument("--max-x", type=int, default=max_default)
    p.add_argument("--max-y", type=int, default=max_default)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200, help="random candidates per sampled size")
    p.add_argument("--workers", type=int, default=1)


def build_parser():
    fmt = argparse.RawDescriptionHelpFormatter
    ap = _Parser(prog="polarframes", description="Polarity frames, substructural logics and their modal companions.",
                 epilog=EPILOG, formatter_class=fmt)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_, description=help_, epilog=EPILOG, formatter_class=fmt)
        p.add_argument("--report", action="store_true", help="print a key: value report")
        return p

    p = add("parse", "parse and pretty-print a formula or sequent")
    p.add_argument("text")
    p.add_argument("--language", choices=("sub", "ml2", "fol"), default="sub")

    p = add("classify", "check the relational constraints of a frame and list its classes")
    p.add_argument("--frame")

    for name, help_ in (("eval", "denotation of a formula in a model"),
                        ("entails", "check a sequent in a model")):
        p = add(name, help_)
        p.add_argument("--frame")
        p.add_argument("--ml2", action="store_true", help="read modal rather than substructural syntax")
        p.add_argument("--val", action="append", metavar="ATOM=POINTS",
                       help="override a valuation line, e.g. p0=x0,x1")
        if name == "eval":
            p.add_argument("formula")
        else:
            p.add_argument("--sequent", required=True)

    p = add("translate", "translate a substructural formula into the modal language")
    p.add_argument("--mode", choices=("bullet", "circ"), default="bullet")
    p.add_argument("formula")

    p = add("faithful", "check the translation identities in a modal model")
    p.add_argument("--frame")
    p.add_argument("--val", action="append", metavar="ATOM=POINTS", help="e.g. P0=x0")
    p.add_argument("formula")

    p = add("countermodel", "bounded search for a frame and valuation refuting a sequent")
    _search_args(p)
    p.add_argument("--sequent", required=True)
    p.add_argument("--out", help="write the countermodel as a frame file")

    p = add("axioms", "check the modal axiom suite of a frame class")
    _search_args(p)
    p.add_argument("--sub-laws", action="store_true", help="also check the stable-set laws")
    p.add_argument("--separating", action="store_true", help="also run the separating checks")

    p = add("canonical", "canonical frame of a finite residuated lattice")
    p.add_argument("--lattice", help="lattice file")
    p.add_argument("--named", help="bundled lattice name")
    p.add_argument("--emit-frame", metavar="OUT", help="write the canonical frame")
    p.add_argument("--verify", action="store_true", help="check the representation")
    p.add_argument("--catalog", type=int, metavar="N", help="verify every residuated lattice with 2..N elements")

    p = add("export-fol", "first-order translation as a TPTP problem")
    p.add_argument("--mode", choices=("ml2", "bullet", "circ"), default="bullet")
    p.add_argument("--reduce", action="store_true", help="relativize to one sort with t1/t2")
    p.add_argument("--format", choices=("fof", "tff"))
    p.add_argument("--include-frame-axioms", action="store_true")
    p.add_argument("--class", dest="cls", choices=CLASSES, help="class constraints added with the frame axioms")
    p.add_argument("--out")
    p.add_argument("formula", nargs="?", help="formula or sequent")
    return ap


def cmd_dispatch(argv, out=None):
    out = out or sys.stdout
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
        if ns.command is None:
            ap.print_help(out)
            return 2
        cfg = RunConfig.from_namespace(ns)
        if cfg.command == "export-fol" and cfg.args.get("include_frame_axioms") is False and cfg.args.get("cls"):
            raise UsageError("--class only applies together with --include-frame-axioms")
        code, human, report = COMMANDS[cfg.command](cfg.args, out)
    except UsageError as exc:
        print(f"polarframes: error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, SortError, FrameError, LatticeError, UnboundAtomError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"polarframes: error: {msg}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"polarframes: error: {exc}", file=sys.stderr)
        return 2
    _emit(out, human, report, cfg.report)
    return code


def main(argv=None):
    sys.exit(cmd_dispatch(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
