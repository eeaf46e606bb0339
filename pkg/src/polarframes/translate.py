"""Translation (``bullet``) and co-translation (``circ``) of substructural
formulas into the two-sorted modal language, and the faithfulness checks.

``bullet`` produces a sort-1 formula whose denotation is the extent of the
source formula in the induced model; ``circ`` produces a sort-2 formula whose
denotation is the intent.  Both are literal structural recursions with no
simplification.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _opcodes as op
from .semantics import (
    ML2Model, Program, SubModel, entails_ml2, entails_sub, eval_ml2, eval_sub,
    reference_eval_sub,
)
from .syntax import (
    And, Atom, Bot, BoxDown, BoxUp, Conj, DiaDown, DiaUp, Disj, Formula, Fuse, LImp, LSpoon,
    MBot, MTop, Neg, Odot, Or, PAtom, RImp, RSpoon, Top, print_formula,
)


def bullet(f: Formula):
    """Sort-1 translation."""
    if isinstance(f, Atom):
        return BoxDown(DiaUp(PAtom(f.index)))
    if isinstance(f, Top):
        return MTop(1)
    if isinstance(f, Bot):
        return MBot(1)
    if isinstance(f, And):
        return Conj(bullet(f.left), bullet(f.right))
    if isinstance(f, Or):
        return BoxDown(Disj(DiaUp(bullet(f.left)), DiaUp(bullet(f.right))))
    if isinstance(f, Fuse):
        return BoxDown(DiaUp(Odot(bullet(f.left), bullet(f.right))))
    if isinstance(f, RImp):
        return RSpoon(bullet(f.left), bullet(f.right))
    if isinstance(f, LImp):
        return LSpoon(bullet(f.left), bullet(f.right))
    raise TypeError(f"not a substructural formula: {f!r}")


def circ(f: Formula):
    """Sort-2 co-translation."""
    if isinstance(f, Atom):
        return BoxUp(Neg(PAtom(f.index)))
    if isinstance(f, Top):
        return MBot(2)
    if isinstance(f, Bot):
        return MTop(2)
    if isinstance(f, And):
        return BoxUp(Disj(DiaDown(circ(f.left)), DiaDown(circ(f.right))))
    if isinstance(f, Or):
        return Conj(circ(f.left), circ(f.right))
    if isinstance(f, Fuse):
        return BoxUp(Neg(Odot(bullet(f.left), bullet(f.right))))
    if isinstance(f, (RImp, LImp)):
        return BoxUp(Neg(bullet(f)))
    raise TypeError(f"not a substructural formula: {f!r}")


def induce_sub_model(m: ML2Model, atoms=None) -> SubModel:
    """Substructural model on the same frame with V(p_i) = [d]<u> iota(P_i)."""
    k = m.frame.kernel
    idx = m.iota1 if atoms is None else {i: m.iota1[i] for i in atoms}
    return SubModel(m.frame, {i: k.box_down(k.diamond_up(s)) for i, s in idx.items()})


# ---------------------------------------------------------------------------
# faithfulness

EXTENT_IDENTITIES = (
    "extent = [[bullet]]",
    "extent = [[[d]~circ]]",
    "extent = [[[d]<u>bullet]]",
    "extent = pointwise extent",
)
INTENT_IDENTITIES = (
    "intent = [[circ]]",
    "intent = [[[u]~bullet]]",
    "intent = [[[u]<d>circ]]",
)
IDENTITIES = EXTENT_IDENTITIES + INTENT_IDENTITIES


@dataclass(frozen=True)
class Identity:
    name: str
    holds: bool
    witness: object = None


@dataclass
class FaithfulnessReport:
    formula: str
    identities: list = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(i.holds for i in self.identities)

    def lines(self):
        out = [f"formula: {self.formula}"]
        for i in self.identities:
            tail = "" if i.holds else f" (witness {i.witness})"
            out.append(f"{i.name}: {'pass' if i.holds else 'FAIL'}{tail}")
        out.append(f"verdict: {'pass' if self.verdict else 'FAIL'}")
        return out


def _diff_witness(names, a, b):
    d = a ^ b
    if not d:
        return None
    return names[(d & -d).bit_length() - 1]


def faithfulness_terms(f: Formula):
    """The modal formulas compared in the faithfulness identities."""
    b, c = bullet(f), circ(f)
    return {
        "bullet": b,
        "boxneg_circ": BoxDown(Neg(c)),
        "closed_bullet": BoxDown(DiaUp(b)),
        "circ": c,
        "boxneg_bullet": BoxUp(Neg(b)),
        "closed_circ": BoxUp(DiaDown(c)),
    }


def verify_faithfulness(m: ML2Model, f: Formula) -> FaithfulnessReport:
    fr = m.frame
    n = induce_sub_model(m)
    concept = eval_sub(n, f)
    ref = reference_eval_sub(n, f)
    terms = {k: eval_ml2(m, a) for k, a in faithfulness_terms(f).items()}
    ext_vals = (terms["bullet"], terms["boxneg_circ"], terms["closed_bullet"], ref.extent)
    int_vals = (terms["circ"], terms["boxneg_bullet"], terms["closed_circ"])
    rep = FaithfulnessReport(print_formula(f))
    for name, v in zip(EXTENT_IDENTITIES, ext_vals):
        w = _diff_witness(fr.X, concept.extent, v)
        rep.identities.append(Identity(name, w is None, w))
    for name, v in zip(INTENT_IDENTITIES, int_vals):
        w = _diff_witness(fr.Y, concept.intent, v)
        rep.identities.append(Identity(name, w is None, w))
    return rep


def sequent_transfer(m: ML2Model, f: Formula, g: Formula):
    """(f |- g in the induced model, bullet entailment, reversed circ entailment)."""
    n = induce_sub_model(m)
    return (
        entails_sub(n, f, g).holds,
        entails_ml2(m, bullet(f), bullet(g)).holds,
        entails_ml2(m, circ(g), circ(f)).holds,
    )


class FaithfulnessBatch:
    """One set program computing, for many formulas at once, the substructural
    extent in the induced model and all six modal terms.

    ``evaluate(kernel, iota)`` returns per formula the tuple
    ``(extent, bullet, boxneg_circ, closed_bullet, circ, boxneg_bullet,
    closed_circ, pointwise_extent, intent)``.
    """

    def __init__(self, formulas):
        self.formulas = list(formulas)
        self.prog = Program(sub_atoms="closed")
        self.slots = []
        for f in self.formulas:
            t = faithfulness_terms(f)
            self.slots.append((
                self.prog.sub(f),
                self.prog.ml2(t["bullet"]),
                self.prog.ml2(t["boxneg_circ"]),
                self.prog.ml2(t["closed_bullet"]),
                self.prog.ml2(t["circ"]),
                self.prog.ml2(t["boxneg_bullet"]),
                self.prog.ml2(t["closed_circ"]),
                self.prog.pointwise(f),
                self.prog.emit(op.POLR, self.prog.sub(f)),
            ))

    def evaluate(self, kernel, iota):
        vals = kernel.run(self.prog.code, list(iota), [])
        return [tuple(vals[s] for s in row) for row in self.slots]

    def failures(self, kernel, iota):
        """Per formula the names of the identities that fail."""
        out = []
        for row in self.evaluate(kernel, iota):
            ext, intent = row[0], row[8]
            ext_terms = (row[1], row[2], row[3], row[7])
            int_terms = (row[4], row[5], row[6])
            out.append([n for n, v in zip(EXTENT_IDENTITIES, ext_terms) if v != ext]
                       + [n for n, v in zip(INTENT_IDENTITIES, int_terms) if v != intent])
        return out
