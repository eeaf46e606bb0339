"""ASTs, parsers and printers for the three formula languages.

* the substructural language: ``p0``, ``top``, ``bot``, ``&``, ``|``, ``*``,
  ``->``, ``<-``;
* the two-sorted modal language: ``P0`` (sort 1), ``Q0`` (sort 2),
  ``top@1 bot@1 top@2 bot@2``, ``~``, ``&``, ``|``, ``*``, ``->``, ``<-``,
  ``[d] [u] <u> <d>``;
* first-order formulas over ``P<i>``, ``Q<i>``, ``I``, ``R``, ``T1``, ``T2``
  and ``=``.

Binary precedence, tightest first, is ``*``, ``&``, ``|``, then ``->`` and
``<-`` on one level.  ``->`` groups to the right and ``<-`` to the left;
mixing the two on one level without parentheses is rejected.  Printing uses
the fewest parentheses that reparse to the same tree.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterator, Union


class ParseError(ValueError):
    """Syntax error with a 0-based character position."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class SortError(ValueError):
    """A subterm has the wrong sort for the operator applied to it."""


# ---------------------------------------------------------------------------
# substructural language


class Formula:
    """Base class of substructural formulas."""

    __slots__ = ()

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 0:
            raise ValueError("atom index must be a natural number")


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Fuse(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class RImp(Formula):
    """``left -> right``: antecedent ``left``."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class LImp(Formula):
    """``left <- right``: consequent ``left``, antecedent ``right``."""

    left: Formula
    right: Formula


SUB_BINARY = {And: "&", Or: "|", Fuse: "*", RImp: "->", LImp: "<-"}


def atoms_of(f) -> set:
    """Atom indices occurring in a substructural or modal formula.

    Modal formulas report pairs ``(sort, index)``.
    """
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.index)
        elif isinstance(g, PAtom):
            out.add((1, g.index))
        elif isinstance(g, QAtom):
            out.add((2, g.index))
        else:
            stack.extend(children(g))
    return out


def children(f) -> tuple:
    if isinstance(f, (Atom, Top, Bot, PAtom, QAtom, MTop, MBot)):
        return ()
    if isinstance(f, (Neg, BoxDown, BoxUp, DiaUp, DiaDown)):
        return (f.child,)
    return (f.left, f.right)


def depth(f) -> int:
    """Nesting depth; atoms and constants have depth 0."""
    kids = children(f)
    return 0 if not kids else 1 + max(depth(k) for k in kids)


# ---------------------------------------------------------------------------
# two-sorted modal language


class SortedFormula:
    """Base class of modal formulas; ``sort`` is 1 (over X) or 2 (over Y)."""

    __slots__ = ()
    sort: int

    def __str__(self):
        return print_formula(self)


def _need(child, want, what):
    if not isinstance(child, SortedFormula):
        raise TypeError(f"{what} expects a modal formula, got {child!r}")
    if child.sort != want:
        raise SortError(
            f"{what} needs a sort-{want} argument but {print_formula(child)!r} has sort {child.sort}"
        )


@dataclass(frozen=True)
class PAtom(SortedFormula):
    index: int

    @property
    def sort(self):
        return 1


@dataclass(frozen=True)
class QAtom(SortedFormula):
    index: int

    @property
    def sort(self):
        return 2


@dataclass(frozen=True)
class MTop(SortedFormula):
    sort: int

    def __post_init__(self):
        if self.sort not in (1, 2):
            raise SortError("sort must be 1 or 2")


@dataclass(frozen=True)
class MBot(SortedFormula):
    sort: int

    def __post_init__(self):
        if self.sort not in (1, 2):
            raise SortError("sort must be 1 or 2")


@dataclass(frozen=True)
class Neg(SortedFormula):
    child: SortedFormula

    def __post_init__(self):
        _need(self.child, self.child.sort if isinstance(self.child, SortedFormula) else 1, "~")

    @property
    def sort(self):
        return self.child.sort


@dataclass(frozen=True)
class Conj(SortedFormula):
    left: SortedFormula
    right: SortedFormula

    def __post_init__(self):
        _need(self.left, getattr(self.right, "sort", 1), "&")
        _need(self.right, self.left.sort, "&")

    @property
    def sort(self):
        return self.left.sort


@dataclass(frozen=True)
class Disj(SortedFormula):
    left: SortedFormula
    right: SortedFormula

    def __post_init__(self):
        _need(self.left, getattr(self.right, "sort", 1), "|")
        _need(self.right, self.left.sort, "|")

    @property
    def sort(self):
        return self.left.sort


@dataclass(frozen=True)
class BoxDown(SortedFormula):
    """``[d]``: sort 2 to sort 1."""

    child: SortedFormula

    def __post_init__(self):
        _need(self.child, 2, "[d]")

    @property
    def sort(self):
        return 1


@dataclass(frozen=True)
class BoxUp(SortedFormula):
    """``[u]``: sort 1 to sort 2."""

    child: SortedFormula

    def __post_init__(self):
        _need(self.child, 1, "[u]")

    @property
    def sort(self):
        return 2


@dataclass(frozen=True)
class DiaUp(SortedFormula):
    """``<u>``: sort 1 to sort 2; stands for ``~[u]~`` with two sorts of negation."""

    child: SortedFormula

    def __post_init__(self):
        _need(self.child, 1, "<u>")

    @property
    def sort(self):
        return 2


@dataclass(frozen=True)
class DiaDown(SortedFormula):
    """``<d>``: sort 2 to sort 1; stands for ``~[d]~``."""

    child: SortedFormula

    def __post_init__(self):
        _need(self.child, 2, "<d>")

    @property
    def sort(self):
        return 1


class _Sort1Binary(SortedFormula):
    __slots__ = ()
    symbol = "?"

    def __post_init__(self):
        _need(self.left, 1, self.symbol)
        _need(self.right, 1, self.symbol)

    @property
    def sort(self):
        return 1


@dataclass(frozen=True)
class Odot(_Sort1Binary):
    left: SortedFormula
    right: SortedFormula
    symbol = "*"


@dataclass(frozen=True)
class RSpoon(_Sort1Binary):
    """``left -> right``: right residual with antecedent ``left``."""

    left: SortedFormula
    right: SortedFormula
    symbol = "->"


@dataclass(frozen=True)
class LSpoon(_Sort1Binary):
    """``left <- right``: left residual, consequent ``left``."""

    left: SortedFormula
    right: SortedFormula
    symbol = "<-"


ML2_BINARY = {Conj: "&", Disj: "|", Odot: "*", RSpoon: "->", LSpoon: "<-"}
ML2_PREFIX = {Neg: "~", BoxDown: "[d]", BoxUp: "[u]", DiaUp: "<u>", DiaDown: "<d>"}


def expand_derived(a: SortedFormula) -> SortedFormula:
    """Rewrite ``<u>a`` as ``~[u]~a`` and ``<d>b`` as ``~[d]~b`` throughout."""
    if isinstance(a, DiaUp):
        return Neg(BoxUp(Neg(expand_derived(a.child))))
    if isinstance(a, DiaDown):
        return Neg(BoxDown(Neg(expand_derived(a.child))))
    if isinstance(a, (Neg, BoxDown, BoxUp)):
        return type(a)(expand_derived(a.child))
    if type(a) in ML2_BINARY:
        return type(a)(expand_derived(a.left), expand_derived(a.right))
    return a


# ---------------------------------------------------------------------------
# first-order language

SORTS = ("x", "y", "u")


@dataclass(frozen=True)
class Var:
    name: str
    sort: str

    def __post_init__(self):
        if self.sort not in SORTS:
            raise SortError(f"unknown variable sort {self.sort!r}")


class FOLFormula:
    __slots__ = ()

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Pred(FOLFormula):
    name: str
    args: tuple


@dataclass(frozen=True)
class Eq(FOLFormula):
    left: Var
    right: Var


@dataclass(frozen=True)
class FNot(FOLFormula):
    child: FOLFormula


@dataclass(frozen=True)
class FAnd(FOLFormula):
    left: FOLFormula
    right: FOLFormula


@dataclass(frozen=True)
class FOr(FOLFormula):
    left: FOLFormula
    right: FOLFormula


@dataclass(frozen=True)
class FImp(FOLFormula):
    left: FOLFormula
    right: FOLFormula


@dataclass(frozen=True)
class Exists(FOLFormula):
    var: Var
    body: FOLFormula


@dataclass(frozen=True)
class Forall(FOLFormula):
    var: Var
    body: FOLFormula


FOL_BINARY = {FAnd: "&", FOr: "|", FImp: "->"}
_PRED_RE = re.compile(r"(P|Q)(\d+)$")


def pred_signature(name: str, reduced: bool = False) -> tuple:
    """Argument sorts of a predicate symbol."""
    if reduced:
        if name in ("T1", "T2") or _PRED_RE.match(name):
            return ("u",)
        if name == "I":
            return ("u", "u")
        if name == "R":
            return ("u", "u", "u")
    else:
        m = _PRED_RE.match(name)
        if m:
            return ("x",) if m.group(1) == "P" else ("y",)
        if name == "I":
            return ("x", "y")
        if name == "R":
            return ("x", "x", "x")
    raise SortError(f"unknown predicate {name!r}" + (" in a reduced formula" if reduced else ""))


def is_reduced(f: FOLFormula) -> bool:
    """True when the formula uses the single sort ``u``."""
    return any(v.sort == "u" for v in all_vars(f))


def all_vars(f: FOLFormula) -> Iterator[Var]:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Pred):
            yield from g.args
        elif isinstance(g, Eq):
            yield g.left
            yield g.right
        elif isinstance(g, FNot):
            stack.append(g.child)
        elif isinstance(g, (Exists, Forall)):
            yield g.var
            stack.append(g.body)
        else:
            stack.extend((g.left, g.right))


def free_vars(f: FOLFormula) -> list:
    """Free variables in first-occurrence order."""
    out: list = []

    def walk(g, bound):
        if isinstance(g, Pred):
            vs = g.args
        elif isinstance(g, Eq):
            vs = (g.left, g.right)
        elif isinstance(g, FNot):
            walk(g.child, bound)
            return
        elif isinstance(g, (Exists, Forall)):
            walk(g.body, bound | {g.var})
            return
        else:
            walk(g.left, bound)
            walk(g.right, bound)
            return
        for v in vs:
            if v not in bound and v not in out:
                out.append(v)

    walk(f, frozenset())
    return out


def check_fol(f: FOLFormula) -> None:
    """Raise SortError unless ``f`` is well sorted.

    A formula is either two-sorted (sorts ``x``/``y``, no ``T1``/``T2``) or
    reduced (every variable of sort ``u``).
    """
    sorts = {v.sort for v in all_vars(f)}
    reduced = "u" in sorts
    if reduced and sorts != {"u"}:
        raise SortError("reduced formula mixes the single sort with x/y sorts")
    names = {}
    for v in all_vars(f):
        if names.setdefault(v.name, v.sort) != v.sort:
            raise SortError(f"variable {v.name!r} used with two sorts")
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Pred):
            sig = pred_signature(g.name, reduced)
            if len(sig) != len(g.args):
                raise SortError(f"{g.name} takes {len(sig)} arguments")
            for want, v in zip(sig, g.args):
                if v.sort != want:
                    raise SortError(f"{g.name} expects sort {want} for {v.name}")
        elif isinstance(g, Eq):
            if g.left.sort != g.right.sort:
                raise SortError("equality between different sorts")
        elif isinstance(g, FNot):
            stack.append(g.child)
        elif isinstance(g, (Exists, Forall)):
            stack.append(g.body)
        else:
            stack.extend((g.left, g.right))


# ---------------------------------------------------------------------------
# lexing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op>->|<-|\|-|[&|*~()=.,:])
  | (?P<box>\[d\]|\[u\]|<u>|<d>)
  | (?P<word>[A-Za-z_][A-Za-z0-9_']*(?:@[12])?)
    """,
    re.VERBOSE,
)


def _lex(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            toks.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _lex(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, val):
        t = self.next()
        if t[1] != val:
            what = "end of input" if t[0] == "eof" else repr(t[1])
            raise ParseError(f"expected {val!r}, found {what}", t[2])
        return t

    def done(self):
        t = self.peek()
        if t[0] != "eof":
            if t[1] == ")":
                raise ParseError("unbalanced parenthesis", t[2])
            raise ParseError(f"unexpected token {t[1]!r}", t[2])

    def fail_operand(self):
        t = self.peek()
        if t[0] == "eof":
            raise ParseError("dangling operator: missing operand", t[2])
        if t[1] == ")":
            raise ParseError("missing operand before ')'", t[2])
        raise ParseError(f"unexpected token {t[1]!r}", t[2])

    # generic binary levels; ``atom`` parses a prefix-level operand
    def binary(self, atom, mk):
        def level_fuse():
            left = atom()
            while self.peek()[1] == "*":
                self.next()
                left = mk("*", left, atom())
            return left

        def level_and():
            left = level_fuse()
            while self.peek()[1] == "&":
                self.next()
                left = mk("&", left, level_fuse())
            return left

        def level_or():
            left = level_and()
            while self.peek()[1] == "|":
                self.next()
                left = mk("|", left, level_and())
            return left

        operands = [level_or()]
        ops = []
        while self.peek()[1] in ("->", "<-"):
            t = self.next()
            if ops and ops[0][0] != t[1]:
                raise ParseError("mixing '->' and '<-' needs parentheses", t[2])
            ops.append((t[1], t[2]))
            operands.append(level_or())
        if not ops:
            return operands[0]
        if ops[0][0] == "->":
            acc = operands[-1]
            for left in reversed(operands[:-1]):
                acc = mk("->", left, acc)
            return acc
        acc = operands[0]
        for right in operands[1:]:
            acc = mk("<-", acc, right)
        return acc


_SUB_MK = {"&": And, "|": Or, "*": Fuse, "->": RImp, "<-": LImp}
_ML2_MK = {"&": Conj, "|": Disj, "*": Odot, "->": RSpoon, "<-": LSpoon}
_ML2_PREFIX_MK = {"~": Neg, "[d]": BoxDown, "[u]": BoxUp, "<u>": DiaUp, "<d>": DiaDown}


def parse_sub(text: str) -> Formula:
    """Parse a substructural formula, e.g. ``"p0 * p1 -> p2"``."""
    p = _Parser(text)

    def atom():
        t = p.peek()
        if t[1] == "(":
            p.next()
            f = p.binary(atom, lambda o, a, b: _SUB_MK[o](a, b))
            if p.peek()[1] != ")":
                t2 = p.peek()
                if t2[0] == "eof":
                    raise ParseError("unbalanced parenthesis: missing ')'", t[2])
                raise ParseError(f"unexpected token {t2[1]!r}", t2[2])
            p.next()
            return f
        if t[0] == "word":
            m = re.fullmatch(r"p(\d+)", t[1])
            if m:
                p.next()
                return Atom(int(m.group(1)))
            if t[1] == "top":
                p.next()
                return Top()
            if t[1] == "bot":
                p.next()
                return Bot()
            raise ParseError(f"unknown symbol {t[1]!r}", t[2])
        p.fail_operand()

    if not text.strip():
        raise ParseError("empty formula", 0)
    f = p.binary(atom, lambda o, a, b: _SUB_MK[o](a, b))
    p.done()
    return f


def parse_ml2(text: str):
    """Parse a modal formula; returns ``(formula, sort)``."""
    p = _Parser(text)

    def build(ctor, *args, pos):
        try:
            return ctor(*args)
        except SortError as exc:
            raise SortError(f"{exc} (at position {pos})") from None

    def atom():
        t = p.peek()
        if t[1] in _ML2_PREFIX_MK or t[0] == "box":
            p.next()
            if t[1] not in _ML2_PREFIX_MK:
                raise ParseError(f"unknown operator {t[1]!r}", t[2])
            return build(_ML2_PREFIX_MK[t[1]], atom(), pos=t[2])
        if t[1] == "(":
            p.next()
            f = p.binary(atom, mk)
            if p.peek()[1] != ")":
                t2 = p.peek()
                if t2[0] == "eof":
                    raise ParseError("unbalanced parenthesis: missing ')'", t[2])
                raise ParseError(f"unexpected token {t2[1]!r}", t2[2])
            p.next()
            return f
        if t[0] == "word":
            m = re.fullmatch(r"([PQ])(\d+)", t[1])
            if m:
                p.next()
                return (PAtom if m.group(1) == "P" else QAtom)(int(m.group(2)))
            consts = {"top@1": MTop(1), "bot@1": MBot(1), "top@2": MTop(2), "bot@2": MBot(2)}
            if t[1] in consts:
                p.next()
                return consts[t[1]]
            raise ParseError(f"unknown symbol {t[1]!r}", t[2])
        p.fail_operand()

    def mk(o, a, b):
        return build(_ML2_MK[o], a, b, pos=p.toks[p.i - 1][2])

    if not text.strip():
        raise ParseError("empty formula", 0)
    f = p.binary(atom, mk)
    p.done()
    return f, f.sort


def parse_sequent(text: str, parser=parse_sub):
    """Split ``"phi |- psi"`` and parse both sides."""
    if text.count("|-") != 1:
        raise ParseError("a sequent needs exactly one '|-'", None)
    left, right = text.split("|-")
    out = []
    for part, offset in ((left, 0), (right, len(left) + 2)):
        try:
            out.append(parser(part))
        except ParseError as exc:
            pos = None if exc.position is None else exc.position + offset
            raise ParseError(str(exc).split(" at position")[0], pos) from None
    return tuple(out)


# ---------------------------------------------------------------------------
# formula populations

SUB_CONNECTIVES = (And, Or, Fuse, RImp, LImp)


def sub_leaves(n_atoms: int = 2) -> list:
    return [Atom(i) for i in range(n_atoms)] + [Top(), Bot()]


def generate_formulas(n_atoms: int = 2, max_depth: int = 3, per_depth: int = 100, seed: int = 0) -> list:
    """Fixed formula population: every formula of depth at most one, then
    ``per_depth`` distinct seeded random formulas of each exact depth from two
    up to ``max_depth``."""
    leaves = sub_leaves(n_atoms)
    out = list(leaves)
    if max_depth >= 1:
        out += [c(a, b) for c in SUB_CONNECTIVES for a in leaves for b in leaves]
    rng = random.Random(f"formulas:{seed}:{n_atoms}")
    by_depth = {0: leaves, 1: out[len(leaves):]}

    def draw(d):
        if d <= 1:
            return rng.choice(by_depth[d])
        c = rng.choice(SUB_CONNECTIVES)
        deep, other = draw(d - 1), draw(rng.randrange(d))
        return c(deep, other) if rng.random() < 0.5 else c(other, deep)

    seen = set(out)
    for d in range(2, max_depth + 1):
        got = 0
        tries = 0
        while got < per_depth and tries < 100 * per_depth:
            tries += 1
            f = draw(d)
            if f not in seen:
                seen.add(f)
                out.append(f)
                got += 1
    return out


# ---------------------------------------------------------------------------
# printing

_PREC = {"*": 4, "&": 3, "|": 2, "->": 1, "<-": 1}


def _print_binary(sym, left_text, left_sym, right_text, right_sym, info=None):
    prec = _PREC[sym]
    if sym == "->":
        lpar = left_sym is not None and _PREC[left_sym] <= prec
        rpar = right_sym is not None and (_PREC[right_sym] < prec or right_sym == "<-")
    elif sym == "<-":
        lpar = left_sym is not None and (_PREC[left_sym] < prec or left_sym == "->")
        rpar = right_sym is not None and _PREC[right_sym] <= prec
    else:
        lpar = left_sym is not None and _PREC[left_sym] < prec
        rpar = right_sym is not None and _PREC[right_sym] <= prec
    if lpar:
        left_text = f"({left_text})"
    if rpar:
        right_text = f"({right_text})"
    if info is not None:
        info.append(rpar)
    return f"{left_text} {sym} {right_text}"


def _print_sub(f):
    """Returns (text, top-level binary symbol or None)."""
    if isinstance(f, Atom):
        return f"p{f.index}", None
    if isinstance(f, Top):
        return "top", None
    if isinstance(f, Bot):
        return "bot", None
    sym = SUB_BINARY[type(f)]
    lt, ls = _print_sub(f.left)
    rt, rs = _print_sub(f.right)
    return _print_binary(sym, lt, ls, rt, rs), sym


def _print_ml2(a):
    if isinstance(a, PAtom):
        return f"P{a.index}", None
    if isinstance(a, QAtom):
        return f"Q{a.index}", None
    if isinstance(a, MTop):
        return f"top@{a.sort}", None
    if isinstance(a, MBot):
        return f"bot@{a.sort}", None
    if type(a) in ML2_PREFIX:
        t, s = _print_ml2(a.child)
        if s is not None:
            t = f"({t})"
        return ML2_PREFIX[type(a)] + t, None
    sym = ML2_BINARY[type(a)]
    lt, ls = _print_ml2(a.left)
    rt, rs = _print_ml2(a.right)
    return _print_binary(sym, lt, ls, rt, rs), sym


def _print_fol(f):
    """Returns (text, top-level binary symbol or None, open) where ``open``
    marks text ending in an unparenthesized quantifier scope."""
    if isinstance(f, Pred):
        return f"{f.name}({', '.join(v.name for v in f.args)})", None, False
    if isinstance(f, Eq):
        return f"{f.left.name} = {f.right.name}", None, False
    if isinstance(f, FNot):
        t, s, o = _print_fol(f.child)
        if s is not None or o or isinstance(f.child, Eq):
            t = f"({t})"
        return "~" + t, None, False
    if isinstance(f, (Exists, Forall)):
        q = "exists" if isinstance(f, Exists) else "forall"
        t, _, _ = _print_fol(f.body)
        return f"{q} {f.var.name}:{f.var.sort}. {t}", None, True
    sym = FOL_BINARY[type(f)]
    lt, ls, lo = _print_fol(f.left)
    rt, rs, ro = _print_fol(f.right)
    # a quantifier scope runs to the right as far as possible
    if lo:
        lt, ls = f"({lt})", None
    info: list = []
    text = _print_binary(sym, lt, ls, rt, rs, info)
    return text, sym, ro and not info[0]


def print_formula(f) -> str:
    """Canonical text of any formula; reparses to the same tree."""
    if isinstance(f, Formula):
        return _print_sub(f)[0]
    if isinstance(f, SortedFormula):
        return _print_ml2(f)[0]
    if isinstance(f, FOLFormula):
        return _print_fol(f)[0]
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# first-order text


def parse_fol(text: str, free_sorts: dict | None = None) -> FOLFormula:
    """Parse the first-order text produced by ``print_formula``.

    Binders carry their sort (``forall y0:y. ...``).  Free variables take
    their sort from ``free_sorts``, else from the first argument position they
    occupy, else from the single sort when the formula is reduced.
    """
    p = _Parser(text)
    raw_free: dict = {}

    def var(bound):
        t = p.next()
        if t[0] != "word":
            raise ParseError("expected a variable", t[2])
        return t

    def atom(bound):
        t = p.peek()
        if t[1] == "~":
            p.next()
            return FNot(atom(bound))
        if t[1] == "(":
            p.next()
            f = formula(bound)
            p.expect(")")
            return f
        if t[0] == "word" and t[1] in ("forall", "exists"):
            p.next()
            name = var(bound)[1]
            p.expect(":")
            st = p.next()
            if st[1] not in SORTS:
                raise ParseError(f"unknown sort {st[1]!r}", st[2])
            p.expect(".")
            v = Var(name, st[1])
            body = formula({**bound, name: v})
            return (Forall if t[1] == "forall" else Exists)(v, body)
        if t[0] == "word":
            p.next()
            if p.peek()[1] == "(":
                p.next()
                args = [var(bound)]
                while p.peek()[1] == ",":
                    p.next()
                    args.append(var(bound))
                p.expect(")")
                return ("pred", t[1], [(a[1], bound.get(a[1])) for a in args])
            p.expect("=")
            other = var(bound)
            return ("eq", (t[1], bound.get(t[1])), (other[1], bound.get(other[1])))
        p.fail_operand()

    def formula(bound):
        return p.binary(lambda: atom(bound), lambda o, a, b: {"&": FAnd, "|": FOr, "->": FImp}.get(o, _bad_fol_op)(a, b))

    # two passes: first build with placeholders, then resolve free sorts
    tree = formula({})
    p.done()

    def collect(g):
        if isinstance(g, tuple):
            if g[0] == "pred":
                return [(n, v, (g[1], k)) for k, (n, v) in enumerate(g[2])]
            return [(g[1][0], g[1][1], None), (g[2][0], g[2][1], None)]
        if isinstance(g, FNot):
            return collect(g.child)
        if isinstance(g, (Exists, Forall)):
            return collect(g.body)
        return collect(g.left) + collect(g.right)

    uses = collect(tree) if not isinstance(tree, tuple) else collect(tree)
    reduced = _any_bound_u(tree) or any(
        slot is not None and slot[0] in ("T1", "T2") for _, _, slot in uses
    )
    sorts = dict(free_sorts or {})
    for name, bound_var, slot in uses:
        if bound_var is None and name not in sorts:
            if reduced:
                sorts[name] = "u"
            elif slot is not None:
                sorts[name] = pred_signature(slot[0])[slot[1]]
    for name, bound_var, slot in uses:
        if bound_var is None and name not in sorts:
            raise SortError(f"cannot infer the sort of free variable {name!r}")
    raw_free.update(sorts)

    def resolve(g):
        if isinstance(g, tuple):
            if g[0] == "pred":
                return Pred(g[1], tuple(v if v is not None else Var(n, raw_free[n]) for n, v in g[2]))
            a = g[1][1] or Var(g[1][0], raw_free[g[1][0]])
            b = g[2][1] or Var(g[2][0], raw_free[g[2][0]])
            return Eq(a, b)
        if isinstance(g, FNot):
            return FNot(resolve(g.child))
        if isinstance(g, (Exists, Forall)):
            return type(g)(g.var, resolve(g.body))
        return type(g)(resolve(g.left), resolve(g.right))

    out = resolve(tree)
    check_fol(out)
    return out


def _bad_fol_op(a, b):
    raise ParseError("'*' and '<-' are not first-order connectives", None)


def _any_bound_u(g):
    if isinstance(g, tuple):
        return False
    if isinstance(g, FNot):
        return _any_bound_u(g.child)
    if isinstance(g, (Exists, Forall)):
        return g.var.sort == "u" or _any_bound_u(g.body)
    return _any_bound_u(g.left) or _any_bound_u(g.right)


AnyFormula = Union[Formula, SortedFormula, FOLFormula]
