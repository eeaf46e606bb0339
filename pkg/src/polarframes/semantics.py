"""Model checking for the substructural and the two-sorted modal language.

``eval_sub`` compiles a formula to a set program and runs it on the frame
kernel: extents come from the stable-set operators and intents from the right
polar.  ``reference_eval_sub`` is an independent, deliberately naive
evaluator that walks the pointwise satisfaction and co-satisfaction clauses
over explicit point sets.  ``eval_ml2`` runs the modal clauses, with the
derived diamonds unfolded into box and the two negations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import _opcodes as op
from . import config
from .frame import Frame, FrameError
from .syntax import (
    And, Atom, Bot, BoxDown, BoxUp, Conj, DiaDown, DiaUp, Disj, Formula, Fuse, LImp, LSpoon,
    MBot, MTop, Neg, Odot, Or, PAtom, QAtom, RImp, RSpoon, SortedFormula, SortError, Top,
    atoms_of, print_formula,
)


class UnboundAtomError(KeyError):
    pass


# ---------------------------------------------------------------------------
# models


class SubModel:
    """Frame plus a valuation of atoms by stable subsets of X."""

    __slots__ = ("frame", "V")

    def __init__(self, frame: Frame, V: dict):
        vals = {}
        for i, s in V.items():
            m = frame.mask_x(s)
            if not frame.is_stable(m):
                raise FrameError(f"valuation of p{i} = {frame.names_x(m)} is not stable")
            vals[int(i)] = m
        self.frame = frame
        self.V = vals

    @classmethod
    def closed(cls, frame: Frame, V: dict) -> "SubModel":
        """Valuation given by arbitrary subsets, each replaced by its closure."""
        return cls(frame, {i: frame.closure_x(frame.mask_x(s)) for i, s in V.items()})

    def atom_list(self, indices):
        return _atom_list(self.V, indices, "p")


class ML2Model:
    """Frame plus interpretations of sort-1 atoms in X and sort-2 atoms in Y."""

    __slots__ = ("frame", "iota1", "iota2")

    def __init__(self, frame: Frame, iota1: dict, iota2: dict | None = None):
        self.frame = frame
        self.iota1 = {int(i): frame.mask_x(s) for i, s in iota1.items()}
        self.iota2 = {int(i): frame.mask_y(s) for i, s in (iota2 or {}).items()}


def _atom_list(vals, indices, prefix):
    if not indices:
        return []
    out = [0] * (max(indices) + 1)
    for i in indices:
        if i not in vals:
            raise UnboundAtomError(f"atom {prefix}{i} has no value")
        out[i] = vals[i]
    return out


@dataclass(frozen=True)
class Concept:
    extent: int
    intent: int


@dataclass(frozen=True)
class Entailment:
    holds: bool
    witness: object = None  # point name, or None when the entailment holds

    def __bool__(self):
        return self.holds


# ---------------------------------------------------------------------------
# compilation to set programs


class Program:
    """Straight-line set program with common-subexpression sharing."""

    def __init__(self, sub_atoms="load"):
        # sub_atoms: "load" reads V(p_i) directly; "closed" reads an
        # interpretation and applies box-down after diamond-up
        self.code: list = []
        self._cse: dict = {}
        self._memo: dict = {}
        self.sub_atoms = sub_atoms
        self.x_atoms: set = set()
        self.y_atoms: set = set()

    def emit(self, code, a=0, b=0):
        key = (code, a, b)
        slot = self._cse.get(key)
        if slot is None:
            slot = len(self.code) // 3
            self.code.extend(key)
            self._cse[key] = slot
        return slot

    def sub(self, f) -> int:
        """Slot holding the extent of a substructural formula."""
        key = id(f)
        hit = self._memo.get(key)
        if hit is not None and hit[0] is f:
            return hit[1]
        e = self.emit
        if isinstance(f, Atom):
            self.x_atoms.add(f.index)
            s = e(op.LOADX, f.index)
            if self.sub_atoms == "closed":
                s = e(op.BOXDOWN, e(op.DIAUP, s))
        elif isinstance(f, Top):
            s = e(op.TOPX)
        elif isinstance(f, Bot):
            s = e(op.POLL, e(op.TOPY))
        elif isinstance(f, And):
            s = e(op.AND, self.sub(f.left), self.sub(f.right))
        elif isinstance(f, Or):
            s = e(op.CLOSX, e(op.OR, self.sub(f.left), self.sub(f.right)))
        elif isinstance(f, Fuse):
            s = e(op.CLOSX, e(op.ODOT, self.sub(f.left), self.sub(f.right)))
        elif isinstance(f, RImp):
            s = e(op.RRES, self.sub(f.left), self.sub(f.right))
        elif isinstance(f, LImp):
            s = e(op.LRES, self.sub(f.left), self.sub(f.right))
        else:
            raise TypeError(f"not a substructural formula: {f!r}")
        self._memo[key] = (f, s)
        return s

    def pointwise(self, f) -> int:
        """Slot holding the extent given by the pointwise clauses, written
        as set operations: a residual reads its consequent through the
        intent, i.e. through the closure of the consequent's extent, and
        fusion goes through the dual relation."""
        key = ("pointwise", id(f))
        hit = self._memo.get(key)
        if hit is not None and hit[0] is f:
            return hit[1]
        e = self.emit
        if isinstance(f, (Atom, Top, Bot)):
            s = self.sub(f)
        elif isinstance(f, And):
            s = e(op.AND, self.pointwise(f.left), self.pointwise(f.right))
        elif isinstance(f, Or):
            cosat = e(op.AND, e(op.POLR, self.pointwise(f.left)), e(op.POLR, self.pointwise(f.right)))
            s = e(op.POLL, cosat)
        elif isinstance(f, Fuse):
            s = e(op.POLL, e(op.POLR, e(op.ODOT, self.pointwise(f.left), self.pointwise(f.right))))
        elif isinstance(f, RImp):
            s = e(op.RRES, self.pointwise(f.left), e(op.CLOSX, self.pointwise(f.right)))
        elif isinstance(f, LImp):
            s = e(op.LRES, e(op.CLOSX, self.pointwise(f.left)), self.pointwise(f.right))
        else:
            raise TypeError(f"not a substructural formula: {f!r}")
        self._memo[key] = (f, s)
        return s

    def ml2(self, a) -> int:
        """Slot holding the denotation of a modal formula."""
        key = id(a)
        hit = self._memo.get(key)
        if hit is not None and hit[0] is a:
            return hit[1]
        e = self.emit
        if isinstance(a, PAtom):
            self.x_atoms.add(a.index)
            s = e(op.LOADX, a.index)
        elif isinstance(a, QAtom):
            self.y_atoms.add(a.index)
            s = e(op.LOADY, a.index)
        elif isinstance(a, MTop):
            s = e(op.TOPX if a.sort == 1 else op.TOPY)
        elif isinstance(a, MBot):
            s = e(op.BOTX if a.sort == 1 else op.BOTY)
        elif isinstance(a, Neg):
            s = e(op.NOTX if a.sort == 1 else op.NOTY, self.ml2(a.child))
        elif isinstance(a, Conj):
            s = e(op.AND, self.ml2(a.left), self.ml2(a.right))
        elif isinstance(a, Disj):
            s = e(op.OR, self.ml2(a.left), self.ml2(a.right))
        elif isinstance(a, BoxDown):
            s = e(op.BOXDOWN, self.ml2(a.child))
        elif isinstance(a, BoxUp):
            s = e(op.BOXUP, self.ml2(a.child))
        elif isinstance(a, DiaUp):
            # ~[u]~ : sort-1 negation inside, sort-2 negation outside
            s = e(op.NOTY, e(op.BOXUP, e(op.NOTX, self.ml2(a.child))))
        elif isinstance(a, DiaDown):
            s = e(op.NOTX, e(op.BOXDOWN, e(op.NOTY, self.ml2(a.child))))
        elif isinstance(a, Odot):
            s = e(op.ODOT, self.ml2(a.left), self.ml2(a.right))
        elif isinstance(a, RSpoon):
            s = e(op.RRES, self.ml2(a.left), self.ml2(a.right))
        elif isinstance(a, LSpoon):
            s = e(op.LRES, self.ml2(a.left), self.ml2(a.right))
        else:
            raise TypeError(f"not a modal formula: {a!r}")
        self._memo[key] = (a, s)
        return s

    def run(self, kernel, atoms_x, atoms_y=()):
        return kernel.run(self.code, list(atoms_x), list(atoms_y))


# ---------------------------------------------------------------------------
# evaluation


def eval_sub(m: SubModel, f: Formula) -> Concept:
    """Extent and intent of ``f`` in a substructural model."""
    prog = Program()
    slot = prog.sub(f)
    vals = prog.run(m.frame.kernel, m.atom_list(prog.x_atoms))
    ext = vals[slot]
    intent = m.frame.kernel.polar_right(ext)
    if config.DEBUG:
        config.debug_check(m.frame.kernel.polar_left(intent) == ext,
                           f"extent of {print_formula(f)} is not stable")
    return Concept(ext, intent)


def eval_ml2(m: ML2Model, a: SortedFormula) -> int:
    """Denotation of ``a``: an X-mask for sort 1, a Y-mask for sort 2."""
    prog = Program()
    slot = prog.ml2(a)
    vals = prog.run(
        m.frame.kernel,
        _atom_list(m.iota1, prog.x_atoms, "P"),
        _atom_list(m.iota2, prog.y_atoms, "Q"),
    )
    return vals[slot]


def _first_outside(a, b):
    d = a & ~b
    if not d:
        return None
    return (d & -d).bit_length() - 1


def entails_sub(m: SubModel, f, g) -> Entailment:
    """Does the extent of ``f`` lie inside the extent of ``g``?"""
    i = _first_outside(eval_sub(m, f).extent, eval_sub(m, g).extent)
    return Entailment(True) if i is None else Entailment(False, m.frame.X[i])


def entails_ml2(m: ML2Model, a, b) -> Entailment:
    if a.sort != b.sort:
        raise SortError(f"cannot compare a sort-{a.sort} formula with a sort-{b.sort} formula")
    i = _first_outside(eval_ml2(m, a), eval_ml2(m, b))
    if i is None:
        return Entailment(True)
    pts = m.frame.X if a.sort == 1 else m.frame.Y
    return Entailment(False, pts[i])


# ---------------------------------------------------------------------------
# reference evaluator on explicit point sets


class ReferenceEvaluator:
    """Pointwise satisfaction (``sat``) and co-satisfaction (``cosat``)
    relations of a substructural model, computed from named points, the
    ``gal`` pairs and the ``r111`` triples only."""

    def __init__(self, m: SubModel):
        fr = m.frame
        self.X = list(fr.X)
        self.Y = list(fr.Y)
        self.gal = set(fr.gal)
        self.R = set(fr.r111)
        self.V = {i: set(fr.names_x(v)) for i, v in m.V.items()}
        self._memo: dict = {}

    def perp(self, x, y):
        return (x, y) in self.gal

    def r_dual(self, y, z, x):
        """y R-dual z x: every w with w R z x is gal-related to y."""
        return all(self.perp(w, y) for w in self.X if (w, z, x) in self.R)

    def co_of(self, sat):
        return {y for y in self.Y if all(self.perp(x, y) for x in sat)}

    def sat_of(self, cosat):
        return {x for x in self.X if all(self.perp(x, y) for y in cosat)}

    def both(self, f):
        key = id(f)
        hit = self._memo.get(key)
        if hit is not None and hit[0] is f:
            return hit[1]
        if isinstance(f, Atom):
            if f.index not in self.V:
                raise UnboundAtomError(f"atom p{f.index} has no value")
            sat = set(self.V[f.index])
            cosat = self.co_of(sat)
        elif isinstance(f, Top):
            sat = set(self.X)
            cosat = self.co_of(sat)
        elif isinstance(f, Bot):
            cosat = set(self.Y)
            sat = self.sat_of(cosat)
        elif isinstance(f, And):
            sat = self.both(f.left)[0] & self.both(f.right)[0]
            cosat = self.co_of(sat)
        elif isinstance(f, Or):
            cosat = self.both(f.left)[1] & self.both(f.right)[1]
            sat = self.sat_of(cosat)
        elif isinstance(f, Fuse):
            left, right = self.both(f.left)[0], self.both(f.right)[0]
            cosat = {
                y for y in self.Y
                if all(self.r_dual(y, z, x) for z in left for x in right)
            }
            sat = self.sat_of(cosat)
        elif isinstance(f, RImp):
            ante, cons_co = self.both(f.left)[0], self.both(f.right)[1]
            sat = {
                x for x in self.X
                if all(self.r_dual(y, z, x) for z in ante for y in cons_co)
            }
            cosat = self.co_of(sat)
        elif isinstance(f, LImp):
            cons_co, ante = self.both(f.left)[1], self.both(f.right)[0]
            sat = {
                x for x in self.X
                if all(self.r_dual(y, x, z) for y in cons_co for z in ante)
            }
            cosat = self.co_of(sat)
        else:
            raise TypeError(f"not a substructural formula: {f!r}")
        self._memo[key] = (f, (sat, cosat))
        return sat, cosat


def reference_eval_sub(m: SubModel, f: Formula) -> Concept:
    sat, cosat = ReferenceEvaluator(m).both(f)
    fr = m.frame
    return Concept(fr.mask_x(sat), fr.mask_y(cosat))


def sub_atoms(f) -> list:
    return sorted(atoms_of(f))


def stable_valuations(frame: Frame, atoms):
    """All valuations of the given atom indices by stable sets, in
    lexicographic order of the stable-set enumeration."""
    atoms = sorted(atoms)
    for combo in product(frame.stable_sets(), repeat=len(atoms)):
        yield dict(zip(atoms, combo))


__all__ = [
    "SubModel", "ML2Model", "Concept", "Entailment", "Program", "UnboundAtomError",
    "eval_sub", "eval_ml2", "entails_sub", "entails_ml2", "reference_eval_sub",
    "ReferenceEvaluator", "stable_valuations",
]
