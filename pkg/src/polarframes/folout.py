"""First-order view of the modal and substructural languages.

* ``st_ml2``: standard translation of modal formulas into two-sorted
  first-order logic;
* ``st_sub``: the composite translation of substructural formulas (through
  ``bullet``/``circ``), and ``st_sub_table`` which builds the same formulas
  row by row in their directly stated form;
* ``sort_reduce``: relativization to a single sort using ``T1``/``T2``;
* ``eval_fol`` (recursive reference evaluator) and ``FolProgram`` (the same
  evaluation on the frame kernel);
* TPTP output (``emit_tptp``, ``emit_problem``) and a reader for it.
"""

from __future__ import annotations

import re
from array import array
from dataclasses import dataclass, field
from itertools import count

from . import _opcodes as op
from .frame import Frame
from .syntax import (
    And, Atom, Bot, BoxDown, BoxUp, Conj, DiaDown, DiaUp, Disj, Eq, Exists, FAnd, FImp, FNot,
    FOLFormula, FOr, Forall, Fuse, LImp, LSpoon, MBot, MTop, Neg, Odot, Or, PAtom, Pred, QAtom,
    RImp, RSpoon, SortError, Top, Var, all_vars, check_fol, free_vars, is_reduced, pred_signature,
)
from .translate import bullet, circ

SORT_OF = {1: "x", 2: "y"}


class TptpError(ValueError):
    pass


# ---------------------------------------------------------------------------
# fresh variables


class Fresh:
    """Deterministic fresh-name supply: ``x0, x1, ...`` and ``y0, y1, ...``."""

    def __init__(self, avoid=()):
        self.counters = {"x": count(), "y": count(), "u": count()}
        self.avoid = {v.name for v in avoid}

    def __call__(self, sort: str) -> Var:
        prefix = "x" if sort == "u" else sort
        while True:
            name = f"{prefix}{next(self.counters[sort])}"
            if name not in self.avoid:
                return Var(name, sort)


def _ands(*parts):
    out = parts[0]
    for p in parts[1:]:
        out = FAnd(out, p)
    return out


# ---------------------------------------------------------------------------
# standard translation


def st_ml2(a, v: Var, fresh: Fresh | None = None) -> FOLFormula:
    """Standard translation of ``a`` at variable ``v`` (sort must match)."""
    if v.sort != SORT_OF[a.sort]:
        raise SortError(f"a sort-{a.sort} formula is translated at a {SORT_OF[a.sort]}-variable, got {v.sort}")
    fresh = fresh or Fresh(avoid=(v,))
    return _st(a, v, fresh)


def _st(a, v, fresh):
    if isinstance(a, PAtom):
        return Pred(f"P{a.index}", (v,))
    if isinstance(a, QAtom):
        return Pred(f"Q{a.index}", (v,))
    if isinstance(a, MTop):
        return Eq(v, v)
    if isinstance(a, MBot):
        return FNot(Eq(v, v))
    if isinstance(a, Neg):
        return FNot(_st(a.child, v, fresh))
    if isinstance(a, Conj):
        return FAnd(_st(a.left, v, fresh), _st(a.right, v, fresh))
    if isinstance(a, Disj):
        return FOr(_st(a.left, v, fresh), _st(a.right, v, fresh))
    if isinstance(a, BoxDown):
        y = fresh("y")
        return Forall(y, FImp(Pred("I", (v, y)), _st(a.child, y, fresh)))
    if isinstance(a, BoxUp):
        x = fresh("x")
        return Forall(x, FImp(Pred("I", (x, v)), _st(a.child, x, fresh)))
    if isinstance(a, DiaUp):
        x = fresh("x")
        return Exists(x, FAnd(Pred("I", (x, v)), _st(a.child, x, fresh)))
    if isinstance(a, DiaDown):
        y = fresh("y")
        return Exists(y, FAnd(Pred("I", (v, y)), _st(a.child, y, fresh)))
    if isinstance(a, Odot):
        z, z2 = fresh("x"), fresh("x")
        return Exists(z, Exists(z2, _ands(Pred("R", (v, z, z2)), _st(a.left, z, fresh), _st(a.right, z2, fresh))))
    if isinstance(a, RSpoon):
        z, z2 = fresh("x"), fresh("x")
        return Forall(z, Forall(z2, FImp(FAnd(_st(a.left, z, fresh), Pred("R", (z2, z, v))),
                                         _st(a.right, z2, fresh))))
    if isinstance(a, LSpoon):
        z, z2 = fresh("x"), fresh("x")
        return Forall(z, Forall(z2, FImp(FAnd(_st(a.right, z, fresh), Pred("R", (z2, v, z))),
                                         _st(a.left, z2, fresh))))
    raise TypeError(f"not a modal formula: {a!r}")


def st_sub(f, v: Var, mode: str = "bullet") -> FOLFormula:
    """First-order translation of a substructural formula by composing the
    modal translation (``bullet`` at an x-variable, ``circ`` at a y-variable)
    with ``st_ml2``."""
    if mode == "bullet":
        if v.sort != "x":
            raise SortError("bullet translation needs an x-variable")
        return st_ml2(bullet(f), v)
    if mode == "circ":
        if v.sort != "y":
            raise SortError("circ translation needs a y-variable")
        return st_ml2(circ(f), v)
    raise ValueError(f"unknown mode {mode!r}")


def st_sub_table(f, v: Var, mode: str = "bullet", fresh: Fresh | None = None) -> FOLFormula:
    """The translation written out row by row, without going through the
    modal formula."""
    fresh = fresh or Fresh(avoid=(v,))
    if mode == "bullet":
        if v.sort != "x":
            raise SortError("bullet translation needs an x-variable")
        return _tb(f, v, fresh)
    if mode == "circ":
        if v.sort != "y":
            raise SortError("circ translation needs a y-variable")
        return _tc(f, v, fresh)
    raise ValueError(f"unknown mode {mode!r}")


def _tb(f, x, fresh):
    if isinstance(f, Atom):
        y = fresh("y")
        z = fresh("x")
        return Forall(y, FImp(Pred("I", (x, y)), Exists(z, FAnd(Pred("I", (z, y)), Pred(f"P{f.index}", (z,))))))
    if isinstance(f, Top):
        return Eq(x, x)
    if isinstance(f, Bot):
        y = fresh("y")
        return Forall(y, FImp(Pred("I", (x, y)), FNot(Eq(y, y))))
    if isinstance(f, And):
        return FAnd(_tb(f.left, x, fresh), _tb(f.right, x, fresh))
    if isinstance(f, Or):
        y = fresh("y")
        z = fresh("x")
        return Forall(y, FImp(Pred("I", (x, y)), Exists(z, FAnd(Pred("I", (z, y)), FOr(
            _tb(f.left, z, fresh), _tb(f.right, z, fresh))))))
    if isinstance(f, Fuse):
        y = fresh("y")
        x2 = fresh("x")
        z, z2 = fresh("x"), fresh("x")
        inner = Exists(z, Exists(z2, _ands(Pred("R", (x2, z, z2)), _tb(f.left, z, fresh), _tb(f.right, z2, fresh))))
        return Forall(y, FImp(Pred("I", (x, y)), Exists(x2, FAnd(Pred("I", (x2, y)), inner))))
    if isinstance(f, RImp):
        z, z2 = fresh("x"), fresh("x")
        return Forall(z, Forall(z2, FImp(FAnd(_tb(f.left, z, fresh), Pred("R", (z2, z, x))),
                                         _tb(f.right, z2, fresh))))
    if isinstance(f, LImp):
        z, z2 = fresh("x"), fresh("x")
        return Forall(z, Forall(z2, FImp(FAnd(_tb(f.right, z, fresh), Pred("R", (z2, x, z))),
                                         _tb(f.left, z2, fresh))))
    raise TypeError(f"not a substructural formula: {f!r}")


def _tc(f, y, fresh):
    if isinstance(f, Atom):
        x = fresh("x")
        return Forall(x, FImp(Pred("I", (x, y)), FNot(Pred(f"P{f.index}", (x,)))))
    if isinstance(f, Top):
        x = fresh("x")
        return Forall(x, FImp(Pred("I", (x, y)), FNot(Eq(x, x))))
    if isinstance(f, Bot):
        return Eq(y, y)
    if isinstance(f, And):
        x = fresh("x")
        v = fresh("y")
        return Forall(x, FImp(Pred("I", (x, y)), Exists(v, FAnd(Pred("I", (x, v)), FOr(
            _tc(f.left, v, fresh), _tc(f.right, v, fresh))))))
    if isinstance(f, Or):
        return FAnd(_tc(f.left, y, fresh), _tc(f.right, y, fresh))
    if isinstance(f, Fuse):
        x = fresh("x")
        z, z2 = fresh("x"), fresh("x")
        inner = Exists(z, Exists(z2, _ands(Pred("R", (x, z, z2)), _tb(f.left, z, fresh), _tb(f.right, z2, fresh))))
        return Forall(x, FImp(Pred("I", (x, y)), FNot(inner)))
    if isinstance(f, (RImp, LImp)):
        x = fresh("x")
        return Forall(x, FImp(Pred("I", (x, y)), FNot(_tb(f, x, fresh))))
    raise TypeError(f"not a substructural formula: {f!r}")


# ---------------------------------------------------------------------------
# sort reduction


def sort_reduce(f: FOLFormula, relativize_atoms: bool = True) -> FOLFormula:
    """Single-sorted version of a two-sorted formula.

    Quantifiers over x (y) are guarded by ``T1`` (``T2``): a universal becomes
    an implication and an existential a conjunction.  With
    ``relativize_atoms`` the unary atoms ``P_i(v)``/``Q_i(v)`` become
    ``T1(v) & P_i(v)``/``T2(v) & Q_i(v)``.
    """
    if is_reduced(f):
        raise SortError("formula is already single-sorted")
    check_fol(f)
    sorts: dict = {}
    for v in all_vars(f):
        if sorts.setdefault(v.name, v.sort) != v.sort:
            raise SortError(f"variable name {v.name} is used at both sorts")
    return _reduce(f, relativize_atoms)


def _u(v: Var) -> Var:
    return Var(v.name, "u")


def _guard(v: Var):
    return Pred("T1" if v.sort == "x" else "T2", (_u(v),))


def _reduce(f, rel):
    if isinstance(f, Pred):
        atom = Pred(f.name, tuple(_u(v) for v in f.args))
        if rel and f.name[0] in "PQ":
            return FAnd(_guard(f.args[0]), atom)
        return atom
    if isinstance(f, Eq):
        return Eq(_u(f.left), _u(f.right))
    if isinstance(f, FNot):
        return FNot(_reduce(f.child, rel))
    if isinstance(f, Forall):
        return Forall(_u(f.var), FImp(_guard(f.var), _reduce(f.body, rel)))
    if isinstance(f, Exists):
        return Exists(_u(f.var), FAnd(_guard(f.var), _reduce(f.body, rel)))
    return type(f)(_reduce(f.left, rel), _reduce(f.right, rel))


# ---------------------------------------------------------------------------
# alpha-equivalence


def nameless(f: FOLFormula, env=()):
    """De Bruijn form: bound variables become binder depths, free ones keep
    their name and sort."""
    def ref(v):
        for depth, w in enumerate(reversed(env)):
            if w == v:
                return ("b", depth)
        return ("f", v.name, v.sort)

    if isinstance(f, Pred):
        return ("P", f.name, tuple(ref(v) for v in f.args))
    if isinstance(f, Eq):
        return ("=", ref(f.left), ref(f.right))
    if isinstance(f, FNot):
        return ("~", nameless(f.child, env))
    if isinstance(f, (Forall, Exists)):
        tag = "A" if isinstance(f, Forall) else "E"
        return (tag, f.var.sort, nameless(f.body, env + (f.var,)))
    return (type(f).__name__, nameless(f.left, env), nameless(f.right, env))


def alpha_equivalent(f: FOLFormula, g: FOLFormula) -> bool:
    return nameless(f) == nameless(g)


def universal_closure(f: FOLFormula) -> FOLFormula:
    for v in reversed(free_vars(f)):
        f = Forall(v, f)
    return f


def to_fof(f: FOLFormula, relativize_atoms: bool = True) -> FOLFormula:
    """Closed single-sorted form of a two-sorted formula."""
    return sort_reduce(universal_closure(f), relativize_atoms)


# ---------------------------------------------------------------------------
# structures and evaluation


@dataclass
class FOStructure:
    """A frame with interpretations of ``P_i`` (subsets of X) and ``Q_i``
    (subsets of Y), read two-sorted or, when ``reduced``, over the single
    carrier X followed by Y with ``T1 = X`` and ``T2 = Y``."""

    frame: Frame
    P: dict = field(default_factory=dict)
    Q: dict = field(default_factory=dict)
    reduced: bool = False

    def as_reduced(self) -> "FOStructure":
        return FOStructure(self.frame, self.P, self.Q, True)

    def carrier(self, sort: str):
        fr = self.frame
        if sort == "u":
            if not self.reduced:
                raise SortError("single-sorted variable in a two-sorted structure")
            return list(fr.X) + list(fr.Y)
        if self.reduced:
            raise SortError(f"{sort}-sorted variable in a reduced structure")
        return list(fr.X) if sort == "x" else list(fr.Y)


class FolEvalError(ValueError):
    pass


def eval_fol(s: FOStructure, f: FOLFormula, assignment: dict | None = None) -> bool:
    """Tarskian truth of ``f`` in ``s``; ``assignment`` maps variable names
    to point names."""
    fr = s.frame
    xs, ys = set(fr.X), set(fr.Y)
    I = {(x, y) for x in fr.X for y in fr.Y} - set(fr.gal)
    R = set(fr.r111)
    P = {i: set(fr.names_x(m)) for i, m in s.P.items()}
    Q = {i: set(fr.names_y(m)) for i, m in s.Q.items()}
    env = dict(assignment or {})
    for v in free_vars(f):
        if v.name not in env:
            raise FolEvalError(f"free variable {v.name} is unassigned")
        pt = env[v.name]
        ok = {"x": pt in xs, "y": pt in ys, "u": pt in xs or pt in ys}[v.sort]
        if not ok or (v.sort == "u") != s.reduced:
            raise FolEvalError(f"{v.name} of sort {v.sort} cannot denote {pt!r}")

    def atom(name, args):
        vals = [env[v.name] for v in args]
        if name == "I":
            return (vals[0], vals[1]) in I
        if name == "R":
            return tuple(vals) in R
        if name == "T1":
            return vals[0] in xs
        if name == "T2":
            return vals[0] in ys
        idx = int(name[1:])
        table = P if name[0] == "P" else Q
        if idx not in table:
            raise FolEvalError(f"predicate {name} is uninterpreted")
        return vals[0] in table[idx]

    def ev(g):
        if isinstance(g, Pred):
            return atom(g.name, g.args)
        if isinstance(g, Eq):
            return env[g.left.name] == env[g.right.name]
        if isinstance(g, FNot):
            return not ev(g.child)
        if isinstance(g, FAnd):
            return ev(g.left) and ev(g.right)
        if isinstance(g, FOr):
            return ev(g.left) or ev(g.right)
        if isinstance(g, FImp):
            return (not ev(g.left)) or ev(g.right)
        want = isinstance(g, Exists)
        saved = env.get(g.var.name, _MISSING)
        result = not want
        for pt in s.carrier(g.var.sort):
            env[g.var.name] = pt
            if ev(g.body) == want:
                result = want
                break
        if saved is _MISSING:
            env.pop(g.var.name, None)
        else:
            env[g.var.name] = saved
        return result

    return ev(f)


_MISSING = object()
_SORT_CODE = {"x": op.SORT_X, "y": op.SORT_Y, "u": op.SORT_U}


class FolProgram:
    """A first-order formula with one free variable compiled to the kernel's
    node format; ``points(structure)`` returns the mask of carrier points
    satisfying it."""

    def __init__(self, f: FOLFormula, free: Var | None = None):
        fv = free_vars(f)
        if free is None:
            if len(fv) != 1:
                raise ValueError("exactly one free variable expected")
            free = fv[0]
        elif any(v != free for v in fv):
            raise ValueError("formula has other free variables")
        self.free = free
        self.reduced = free.sort == "u" or is_reduced(f)
        self.nodes: list = []
        self.slots: dict = {free: 0}
        self.root = self._compile(f)

    def _slot(self, v):
        if v not in self.slots:
            self.slots[v] = len(self.slots)
        return self.slots[v]

    def _node(self, code, a=0, b=0, c=0):
        self.nodes.extend((code, a, b, c))
        return len(self.nodes) // 4 - 1

    def _compile(self, f):
        if isinstance(f, Pred):
            n = f.name
            s = [self._slot(v) for v in f.args]
            if n == "I":
                return self._node(op.F_I, s[0], s[1])
            if n == "R":
                return self._node(op.F_R, s[0], s[1], s[2])
            if n == "T1":
                return self._node(op.F_T1, s[0])
            if n == "T2":
                return self._node(op.F_T2, s[0])
            return self._node(op.F_P if n[0] == "P" else op.F_Q, int(n[1:]), s[0])
        if isinstance(f, Eq):
            return self._node(op.F_EQ, self._slot(f.left), self._slot(f.right))
        if isinstance(f, FNot):
            return self._node(op.F_NOT, self._compile(f.child))
        if isinstance(f, (Forall, Exists)):
            body = self._compile(f.body)
            code = op.F_FORALL if isinstance(f, Forall) else op.F_EXISTS
            return self._node(code, self._slot(f.var), _SORT_CODE[f.var.sort], body)
        code = {FAnd: op.F_AND, FOr: op.F_OR, FImp: op.F_IMP}[type(f)]
        return self._node(code, self._compile(f.left), self._compile(f.right))

    def packed(self):
        if getattr(self, "_packed", None) is None or len(self._packed) != len(self.nodes):
            self._packed = array("i", self.nodes)
        return self._packed

    def points(self, s: FOStructure, p_list=None, q_list=None) -> int:
        k = s.frame.kernel
        px = p_list if p_list is not None else _dense(s.P)
        qy = q_list if q_list is not None else _dense(s.Q)
        return k.fol_mask(self.packed(), self.root, 0, _SORT_CODE[self.free.sort],
                          len(self.slots), px, qy, s.reduced)


class FolBatch(FolProgram):
    """Several formulas with the same single free variable compiled into one
    node table; ``points`` returns one mask per formula."""

    def __init__(self, formulas, free: Var):
        self.free = free
        self.nodes = []
        self.slots = {free: 0}
        self.roots = []
        reduced = free.sort == "u"
        for f in formulas:
            if any(v != free for v in free_vars(f)):
                raise ValueError("formula has other free variables")
            reduced = reduced or is_reduced(f)
            self.roots.append(self._compile(f))
        self.reduced = reduced

    def points(self, s: FOStructure, p_list=None, q_list=None) -> list:
        px = p_list if p_list is not None else _dense(s.P)
        qy = q_list if q_list is not None else _dense(s.Q)
        return self.masks(s.frame.kernel, px, qy, s.reduced)

    def masks(self, kernel, p_list, q_list=(), reduced=False) -> list:
        """``points`` straight on a frame kernel with dense atom lists."""
        return kernel.fol_masks(self.packed(), self.roots, 0, _SORT_CODE[self.free.sort],
                                len(self.slots), list(p_list), list(q_list), reduced)


def _dense(d):
    if not d:
        return []
    out = [0] * (max(d) + 1)
    for i, m in d.items():
        out[i] = m
    return out


# ---------------------------------------------------------------------------
# frame conditions as first-order sentences


def frame_axioms(conditions=("C1", "C2", "C3", "C4")) -> list:
    """(name, formula) pairs: the two D-conditions followed by the requested
    relational constraints."""
    x, y, z, z2, w, u, v = (Var(n, s) for n, s in (
        ("x", "x"), ("y", "y"), ("z", "x"), ("z1", "x"), ("w", "x"), ("u", "x"), ("v", "x")))
    out = [
        ("d_x", Forall(x, Exists(y, Pred("I", (x, y))))),
        ("d_y", Forall(y, Exists(x, Pred("I", (x, y))))),
    ]
    for c in conditions:
        if c == "C1":
            lhs = Exists(x, FAnd(Pred("R", (x, u, v)), Pred("R", (z, x, w))))
            rhs = Exists(x, FAnd(Pred("R", (x, v, w)), Pred("R", (z, u, x))))
            body = FAnd(FImp(lhs, rhs), FImp(rhs, lhs))
            out.append(("c1", Forall(w, Forall(z, Forall(u, Forall(v, body))))))
        elif c == "C2":
            body = FAnd(FImp(Pred("R", (x, z, z2)), Pred("R", (x, z2, z))),
                        FImp(Pred("R", (x, z2, z)), Pred("R", (x, z, z2))))
            out.append(("c2", Forall(x, Forall(z, Forall(z2, body)))))
        elif c == "C3":
            # z1 precedes x: every y gal-related to z1 is gal-related to x
            below = Forall(y, FImp(FNot(Pred("I", (z2, y))), FNot(Pred("I", (x, y)))))
            out.append(("c3", Forall(x, Forall(z, Forall(z2, FImp(Pred("R", (x, z, z2)), below))))))
        elif c == "C4":
            out.append(("c4", Forall(x, Pred("R", (x, x, x)))))
        else:
            raise ValueError(f"unknown condition {c!r}")
    return out


# ---------------------------------------------------------------------------
# TPTP output


def _tvar(v: Var) -> str:
    return v.name[0].upper() + v.name[1:].replace("'", "_")


def _tpred(name: str) -> str:
    return name.lower()


def _tptp(f, typed):
    if isinstance(f, Pred):
        return f"{_tpred(f.name)}({','.join(_tvar(v) for v in f.args)})"
    if isinstance(f, Eq):
        return f"{_tvar(f.left)} = {_tvar(f.right)}"
    if isinstance(f, FNot):
        inner = _tptp(f.child, typed)
        if isinstance(f.child, Eq):
            inner = f"({inner})"
        return f"~ {inner}"
    if isinstance(f, (Forall, Exists)):
        q = "!" if isinstance(f, Forall) else "?"
        binder = f"{_tvar(f.var)}: {f.var.sort}" if typed else _tvar(f.var)
        return f"{q} [{binder}] : {_tptp(f.body, typed)}"
    sym = {FAnd: "&", FOr: "|", FImp: "=>"}[type(f)]
    return f"({_tptp(f.left, typed)} {sym} {_tptp(f.right, typed)})"


def emit_tptp(f: FOLFormula, name: str, role: str = "conjecture", fmt: str | None = None) -> str:
    """One annotated TPTP formula.  Single-sorted formulas are emitted as FOF,
    two-sorted ones as TFF over the types ``x`` and ``y``; free variables are
    universally closed."""
    if role not in ("axiom", "conjecture", "hypothesis"):
        raise ValueError(f"unsupported role {role!r}")
    if not re.fullmatch(r"[a-z][a-z0-9_]*", name):
        raise ValueError(f"bad TPTP formula name {name!r}")
    check_fol(f)
    reduced = is_reduced(f) or not any(True for _ in all_vars(f))
    fmt = fmt or ("fof" if reduced else "tff")
    if fmt == "fof" and not reduced:
        raise SortError("FOF output needs a single-sorted formula; apply sort_reduce first")
    if fmt == "tff" and is_reduced(f):
        raise SortError("TFF output expects a two-sorted formula")
    if fmt not in ("fof", "tff"):
        raise ValueError(f"unknown format {fmt!r}")
    if fmt == "fof" and free_vars(f):
        raise SortError("close the formula before sort reduction so free variables get their guards")
    g = universal_closure(f)
    return f"{fmt}({name}, {role}, {_tptp(g, fmt == 'tff')})."


def _signature(formulas):
    preds = {}
    for f in formulas:
        stack = [f]
        while stack:
            g = stack.pop()
            if isinstance(g, Pred):
                preds[g.name] = len(g.args)
            elif isinstance(g, FNot):
                stack.append(g.child)
            elif isinstance(g, (Forall, Exists)):
                stack.append(g.body)
            elif not isinstance(g, Eq):
                stack.extend((g.left, g.right))
    return preds


def tff_declarations(formulas) -> list:
    lines = ["tff(x_type, type, x: $tType).", "tff(y_type, type, y: $tType)."]
    for name in sorted(_signature(formulas), key=_pred_order):
        sig = pred_signature(name)
        args = sig[0] if len(sig) == 1 else "(" + " * ".join(sig) + ")"
        lines.append(f"tff({_tpred(name)}_decl, type, {_tpred(name)}: {args} > $o).")
    return lines


def _pred_order(name):
    order = {"I": 0, "R": 1, "T1": 2, "T2": 3}
    if name in order:
        return (0, order[name], 0)
    return (1, name[0], int(name[1:]))


def emit_problem(entries, fmt="fof", header=None) -> str:
    """A complete TPTP problem from ``(name, role, formula)`` entries.

    FOF problems get the non-emptiness axioms for ``T1``/``T2``; TFF problems
    get the type declarations.
    """
    lines = []
    if header:
        lines.extend(f"% {h}" for h in header.splitlines())
    formulas = [f for _, _, f in entries]
    if fmt == "tff":
        lines.extend(tff_declarations(formulas))
    elif fmt == "fof":
        lines.append("fof(t1_nonempty, axiom, ? [U] : t1(U)).")
        lines.append("fof(t2_nonempty, axiom, ? [U] : t2(U)).")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    for name, role, f in entries:
        lines.append(emit_tptp(f, name, role, fmt))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# TPTP reader (the fragment written above)

_TPTP_TOKEN = re.compile(r"\s*(=>|<=>|!=|\$tType|\$o|[!?~&|()\[\],:.=*>]|[A-Za-z_][A-Za-z0-9_]*|%[^\n]*)")


def _tptp_tokens(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TPTP_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise TptpError(f"unexpected TPTP input at offset {pos}: {text[pos:pos + 20]!r}")
        tok = m.group(1)
        pos = m.end()
        if not tok.startswith("%"):
            out.append(tok)
    return out


@dataclass
class TptpFormula:
    language: str
    name: str
    role: str
    formula: FOLFormula | None  # None for type declarations


def parse_tptp(text: str) -> list:
    """Read annotated ``fof``/``tff`` formulas back into first-order ASTs.

    FOF variables get the single sort; TFF binders carry ``x`` or ``y``.
    Predicate names map back to ``P0``, ``Q0``, ``I``, ``R``, ``T1``, ``T2``.
    """
    toks = _tptp_tokens(text)
    i = 0
    out = []

    def expect(t):
        nonlocal i
        if i >= len(toks) or toks[i] != t:
            got = toks[i] if i < len(toks) else "end of input"
            raise TptpError(f"expected {t!r}, found {got!r}")
        i += 1

    def take():
        nonlocal i
        if i >= len(toks):
            raise TptpError("unexpected end of input")
        i += 1
        return toks[i - 1]

    while i < len(toks):
        lang = take()
        if lang not in ("fof", "tff"):
            raise TptpError(f"unsupported TPTP language {lang!r}")
        expect("(")
        name = take()
        expect(",")
        role = take()
        expect(",")
        if role == "type":
            depth = 0
            while not (toks[i] == ")" and depth == 0):
                depth += {"(": 1, ")": -1}.get(toks[i], 0)
                i += 1
            expect(")")
            expect(".")
            out.append(TptpFormula(lang, name, role, None))
            continue
        env: dict = {}

        def unit():
            nonlocal i
            t = take()
            if t == "~":
                return FNot(unit())
            if t == "(":
                f = formula()
                expect(")")
                return f
            if t in ("!", "?"):
                expect("[")
                vname = take()
                sort = "u"
                if toks[i] == ":":
                    i += 1
                    sort = take()
                expect("]")
                expect(":")
                v = Var(vname[0].lower() + vname[1:], sort)
                saved = env.get(vname)
                env[vname] = v
                body = unit()
                if saved is None:
                    env.pop(vname)
                else:
                    env[vname] = saved
                return (Forall if t == "!" else Exists)(v, body)
            if t[0].isupper():
                if t not in env:
                    raise TptpError(f"unbound variable {t}")
                op_ = take()
                if op_ not in ("=", "!="):
                    raise TptpError(f"expected '=' after variable {t}")
                other = take()
                if other not in env:
                    raise TptpError(f"unbound variable {other}")
                eq = Eq(env[t], env[other])
                return eq if op_ == "=" else FNot(eq)
            pname = t.upper() if t in ("i", "r", "t1", "t2") else t[0].upper() + t[1:]
            expect("(")
            args = []
            while True:
                a = take()
                if a not in env:
                    raise TptpError(f"unbound variable {a}")
                args.append(env[a])
                if toks[i] == ",":
                    i += 1
                    continue
                break
            expect(")")
            return Pred(pname, tuple(args))

        def formula():
            nonlocal i
            left = unit()
            if i < len(toks) and toks[i] in ("&", "|", "=>"):
                sym = take()
                right = unit()
                left = {"&": FAnd, "|": FOr, "=>": FImp}[sym](left, right)
                if toks[i] in ("&", "|", "=>"):
                    raise TptpError("binary TPTP connectives must be parenthesized")
            return left

        f = formula()
        expect(")")
        expect(".")
        check_fol(f)
        out.append(TptpFormula(lang, name, role, f))
    return out
