"""Frame enumeration, countermodel search and axiom-suite checks.

The candidate stream for a budget is a fixed sequence of (gal, r111) tables:
sizes in order of ``nx + ny`` then ``nx``; inside a size either every pair of
tables in lexicographic encoding order (small sizes) or a structured part
followed by seeded random samples.  Each candidate carries its position in
that sequence, which is what makes runs reproducible and lets several worker
processes split the stream by index residue.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

from . import algebra
from .frame import CLASS_CONDITIONS, Frame, frame_to_text
from .kernels import make_kernel
from .semantics import Program, SubModel, entails_sub
from .syntax import (
    Formula, atoms_of, parse_ml2, parse_sequent, parse_sub, print_formula,
)
from .translate import bullet, circ

CLASSES = ("nfl", "fl", "bci", "bcw", "bck")
EXHAUSTIVE_LIMIT = (2, 2)


def class_conditions(cls: str) -> tuple:
    label = cls.upper()
    if label not in CLASS_CONDITIONS:
        raise ValueError(f"unknown frame class {cls!r}; expected one of {', '.join(CLASSES)}")
    return CLASS_CONDITIONS[label]


@dataclass(frozen=True)
class SearchBudget:
    """Size bounds and sampling parameters of a search.

    ``exhaustive`` None means: enumerate everything at sizes within
    ``EXHAUSTIVE_LIMIT``, sample above.  ``samples`` is the number of random
    candidates per sampled size; ``max_interpretations`` caps the modal
    interpretations tried per frame in axiom checks.
    """

    max_x: int = 2
    max_y: int = 2
    min_x: int = 1
    min_y: int = 1
    exhaustive: bool | None = None
    seed: int = 0
    samples: int = 200
    workers: int = 1
    max_interpretations: int = 256

    def __post_init__(self):
        for name in ("max_x", "max_y", "min_x", "min_y", "workers", "max_interpretations"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.samples < 0:
            raise ValueError("samples must be non-negative")
        if self.min_x > self.max_x or self.min_y > self.max_y:
            raise ValueError("minimum size exceeds maximum size")
        if self.exhaustive and (self.max_x > 3 or self.max_y > 3):
            raise ValueError("exhaustive enumeration is limited to three points per sort")

    def sizes(self):
        s = [(nx, ny) for nx in range(self.min_x, self.max_x + 1) for ny in range(self.min_y, self.max_y + 1)]
        return sorted(s, key=lambda p: (p[0] + p[1], p[0]))

    def is_exhaustive(self, nx, ny) -> bool:
        if self.exhaustive is None:
            return nx <= EXHAUSTIVE_LIMIT[0] and ny <= EXHAUSTIVE_LIMIT[1]
        return self.exhaustive

    def summary(self) -> str:
        parts = []
        for nx, ny in self.sizes():
            parts.append(f"{nx}x{ny}:{'all' if self.is_exhaustive(nx, ny) else 'sampled'}")
        return f"|X|<={self.max_x} |Y|<={self.max_y} seed={self.seed} samples={self.samples} " + " ".join(parts)


# ---------------------------------------------------------------------------
# candidate stream


def _gal_rows(code, nx, ny):
    full = (1 << ny) - 1
    return [(code >> (x * ny)) & full for x in range(nx)]


def _passes_d(rows, nx, ny):
    full = (1 << ny) - 1
    if any(r == full for r in rows):
        return False
    allc = full
    for r in rows:
        allc &= r
    return allc == 0


def d_gals(nx, ny) -> list:
    """Every gal relation (as row masks) passing the D-conditions, in
    encoding order."""
    out = []
    for code in range(1 << (nx * ny)):
        rows = _gal_rows(code, nx, ny)
        if _passes_d(rows, nx, ny):
            out.append(rows)
    return out


def _rp_of_code(code, nx):
    full = (1 << nx) - 1
    return [(code >> (i * nx)) & full for i in range(nx * nx)]


_SEMIGROUPS: dict = {}


def semigroup_tables(n: int) -> list:
    """All associative operation tables on ``n`` labelled points (n <= 3),
    in lexicographic order."""
    if n > 3:
        raise ValueError("semigroup enumeration is limited to three points")
    if n not in _SEMIGROUPS:
        out = []
        r = range(n)
        for flat in product(r, repeat=n * n):
            t = [flat[i * n:(i + 1) * n] for i in range(n)]
            if all(t[t[a][b]][c] == t[a][t[b][c]] for a in r for b in r for c in r):
                out.append(tuple(tuple(row) for row in t))
        _SEMIGROUPS[n] = out
    return _SEMIGROUPS[n]


def _monoid_rp(table):
    n = len(table)
    return [1 << table[z][w] for z in range(n) for w in range(n)]


def _candidates(budget: SearchBudget):
    """Yield ``(index, nx, ny, gal_rows, rp)``; indices run over all sizes."""
    idx = 0
    for nx, ny in budget.sizes():
        gals = d_gals(nx, ny) if nx * ny <= 12 else None
        if budget.is_exhaustive(nx, ny):
            for rows in gals:
                for code in range(1 << (nx ** 3)):
                    yield idx, nx, ny, rows, _rp_of_code(code, nx)
                    idx += 1
            continue
        seen = set()
        rng = random.Random(f"polarframes:{budget.seed}:{nx}:{ny}")

        def random_gal():
            if gals is not None:
                return gals[rng.randrange(len(gals))]
            while True:
                rows = [rng.randrange(1 << ny) for _ in range(nx)]
                if _passes_d(rows, nx, ny):
                    return rows

        def emit(rows, rp):
            key = (tuple(rows), tuple(rp))
            if key in seen:
                return False
            seen.add(key)
            return True

        structured = []
        if gals is not None:
            structured.extend((rows, [0] * (nx * nx)) for rows in gals)
        if nx <= 3:
            for t in semigroup_tables(nx):
                structured.append((random_gal(), _monoid_rp(t)))
        for rows, rp in structured:
            if emit(rows, rp):
                yield idx, nx, ny, rows, rp
                idx += 1
        full = (1 << nx) - 1
        for _ in range(budget.samples):
            rows = random_gal()
            density = rng.choice((0.05, 0.1, 0.2, 0.35, 0.5, 0.75))
            rp = [sum(1 << x for x in range(nx) if rng.random() < density) & full for _ in range(nx * nx)]
            if emit(rows, rp):
                yield idx, nx, ny, rows, rp
                idx += 1


def _kernel_in_class(k, conds) -> bool:
    checks = {"C1": k.check_c1, "C2": k.check_c2, "C3": k.check_c3, "C4": k.check_c4}
    return all(checks[c]() is None for c in conds)


def stream(budget: SearchBudget, cls: str = "nfl", residue: int = 0, modulus: int = 1):
    """Yield ``(index, frame)`` for the candidates in the class whose index
    is congruent to ``residue`` modulo ``modulus``."""
    conds = class_conditions(cls)
    for idx, nx, ny, rows, rp in _candidates(budget):
        if idx % modulus != residue:
            continue
        k = make_kernel(nx, ny, rows, rp)
        if not _kernel_in_class(k, conds):
            continue
        yield idx, Frame.from_tables(nx, ny, rows, rp, name=f"candidate-{idx}")


def enumerate_frames(budget: SearchBudget, cls: str = "nfl"):
    """Deterministic stream of frames in the class."""
    for _, fr in stream(budget, cls):
        yield fr


def monoid_frame(table, gal, name=None) -> Frame:
    """Frame whose ternary relation is the graph of an associative
    operation: ``x R z z'`` iff ``x = z . z'``.

    ``gal`` is either a Frame (its gal relation is reused) or a list of row
    masks.
    """
    n = len(table)
    if any(len(row) != n for row in table):
        raise ValueError("operation table must be square")
    r = range(n)
    for a, b, c in product(r, r, r):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise ValueError(f"operation is not associative at ({a}, {b}, {c})")
    if isinstance(gal, Frame):
        if gal.nx != n:
            raise ValueError("gal frame has the wrong number of X points")
        rows, ny = list(gal.kernel.gal_rows), gal.ny
        X, Y = gal.X, gal.Y
    else:
        rows = list(gal)
        if len(rows) != n:
            raise ValueError("one gal row per point expected")
        ny = max((m.bit_length() for m in rows), default=0) or 1
        X, Y = [f"x{i}" for i in range(n)], [f"y{j}" for j in range(ny)]
    gal_pairs = [(X[x], Y[y]) for x in r for y in range(ny) if rows[x] >> y & 1]
    triples = [(X[table[z][w]], X[z], X[w]) for z in r for w in r]
    return Frame(X, Y, gal_pairs, triples, name=name)


# ---------------------------------------------------------------------------
# countermodel search


@dataclass
class Countermodel:
    frame: Frame
    valuation: dict
    witness: str
    index: int
    cls: str
    sequent: str
    disagreement: str | None = None

    found = True

    def submodel(self) -> SubModel:
        return SubModel(self.frame, self.valuation)

    def recheck(self, lhs: Formula, rhs: Formula) -> bool:
        """Class membership, stability of the valuation and failure at the
        witness, all recomputed from scratch."""
        if not self.frame.in_class(self.cls):
            return False
        try:
            m = SubModel(self.frame, self.valuation)
        except Exception:
            return False
        e = entails_sub(m, lhs, rhs)
        return (not e.holds) and e.witness == self.witness

    def frame_text(self) -> str:
        return frame_to_text(self.frame, sub_val=self.valuation,
                             comment=f"countermodel for {self.sequent} in class {self.cls}, witness {self.witness}")

    def lines(self) -> list:
        fr = self.frame
        out = [
            "verdict: countermodel",
            f"class: {self.cls}",
            f"sequent: {self.sequent}",
            f"candidate: {self.index}",
            f"size: {fr.nx}x{fr.ny}",
            f"witness: {self.witness}",
        ]
        for i in sorted(self.valuation):
            out.append(f"p{i}: {' '.join(fr.names_x(self.valuation[i])) or '-'}")
        out.append(f"modal route agreement: {'yes' if self.disagreement is None else 'NO'}")
        if self.disagreement is not None:
            out.append(f"first disagreement: {self.disagreement}")
        return out


@dataclass
class NoCounterexample:
    cls: str
    sequent: str
    frames: int
    valuations: int
    budget: SearchBudget
    agreement: bool = True
    disagreement: str | None = None

    found = False

    def lines(self) -> list:
        return [
            "verdict: no counterexample up to bound",
            f"class: {self.cls}",
            f"sequent: {self.sequent}",
            f"bound: {self.budget.summary()}",
            f"frames: {self.frames}",
            f"valuations: {self.valuations}",
            f"modal route agreement: {'yes' if self.agreement else 'NO'}",
        ] + ([f"first disagreement: {self.disagreement}"] if self.disagreement else [])


NoCounterexampleUpToBound = NoCounterexample


class RouteDisagreement(AssertionError):
    """The substructural and modal verdicts differ on some model."""


class _SequentChecker:
    """One program evaluating both sides of a sequent and, optionally, their
    translations and co-translations."""

    def __init__(self, lhs, rhs, cross_check, strict=False):
        self.prog = Program()
        self.strict = strict
        # first model where the three verdicts differ, as text
        self.disagreement = None
        self.l, self.r = self.prog.sub(lhs), self.prog.sub(rhs)
        self.cross = cross_check
        if cross_check:
            self.bl, self.br = self.prog.ml2(bullet(lhs)), self.prog.ml2(bullet(rhs))
            self.cl, self.cr = self.prog.ml2(circ(lhs)), self.prog.ml2(circ(rhs))
        self.atoms = sorted(atoms_of(lhs) | atoms_of(rhs))
        self.width = (max(self.atoms) + 1) if self.atoms else 0

    def scan(self, frame):
        """(first failing valuation and witness index or None, valuations tried)."""
        k = frame.kernel
        code = self.prog.code
        stable = frame.stable_sets()
        tried = 0
        for combo in product(stable, repeat=len(self.atoms)):
            vals_in = [0] * self.width
            for a, m in zip(self.atoms, combo):
                vals_in[a] = m
            v = k.run(code, vals_in, [])
            tried += 1
            bad = v[self.l] & ~v[self.r]
            if self.cross and self.disagreement is None:
                b_ok = not v[self.bl] & ~v[self.br]
                c_ok = not v[self.cr] & ~v[self.cl]
                if (not bad) != b_ok or b_ok != c_ok:
                    vs = " ".join(f"p{a}={{{','.join(frame.names_x(m))}}}" for a, m in zip(self.atoms, combo))
                    self.disagreement = f"{frame.name} {vs}"
                    if self.strict:
                        raise RouteDisagreement(f"verdicts differ on {self.disagreement}")
            if bad:
                return (dict(zip(self.atoms, combo)), (bad & -bad).bit_length() - 1), tried
        return None, tried


def _scan_worker(args):
    cls, lhs_text, rhs_text, budget, residue, modulus, cross = args
    lhs, rhs = parse_sub(lhs_text), parse_sub(rhs_text)
    chk = _SequentChecker(lhs, rhs, cross)
    frames = vals = 0
    first_dis = None
    for idx, fr in stream(budget, cls, residue, modulus):
        hit, tried = chk.scan(fr)
        frames += 1
        vals += tried
        if first_dis is None and chk.disagreement is not None:
            first_dis = (idx, chk.disagreement)
        if hit is not None:
            val, wi = hit
            return idx, val, wi, frames, vals, first_dis
    return None, None, None, frames, vals, first_dis


def _split_sequent(sequent):
    if isinstance(sequent, str):
        lhs, rhs = parse_sequent(sequent)
    else:
        lhs, rhs = sequent
    return lhs, rhs


def find_countermodel(cls: str, lhs, rhs=None, budget: SearchBudget | None = None,
                      cross_check: bool = True):
    """Search the class for a model where ``lhs |- rhs`` fails.

    ``lhs`` may be a sequent string when ``rhs`` is None.  Returns a
    ``Countermodel`` (the least candidate index over all workers) or
    ``NoCounterexample``.
    """
    budget = budget or SearchBudget()
    class_conditions(cls)
    if rhs is None:
        lhs, rhs = _split_sequent(lhs)
    elif isinstance(lhs, str):
        lhs, rhs = parse_sub(lhs), parse_sub(rhs)
    seq = f"{print_formula(lhs)} |- {print_formula(rhs)}"
    lt, rt = print_formula(lhs), print_formula(rhs)
    jobs = [(cls, lt, rt, budget, r, budget.workers, cross_check) for r in range(budget.workers)]
    if budget.workers == 1:
        results = [_scan_worker(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=budget.workers) as ex:
            results = list(ex.map(_scan_worker, jobs))
    hits = [r for r in results if r[0] is not None]
    if hits:
        idx, val, wi = min(hits, key=lambda r: r[0])[:3]
        # disagreements seen below the reported candidate only, so the
        # answer does not depend on the worker count
        dis = min((r[5] for r in results if r[5] is not None and r[5][0] <= idx), default=None)
        fr = _frame_at(budget, idx)
        cm = Countermodel(fr, val, fr.X[wi], idx, cls, seq, dis[1] if dis else None)
        if not cm.recheck(lhs, rhs):
            raise AssertionError("countermodel failed to re-validate")
        return cm
    dis = min((r[5] for r in results if r[5] is not None), default=None)
    return NoCounterexample(cls, seq, sum(r[3] for r in results), sum(r[4] for r in results), budget,
                            dis is None, dis[1] if dis else None)


def _frame_at(budget, index):
    for idx, nx, ny, rows, rp in _candidates(budget):
        if idx == index:
            return Frame.from_tables(nx, ny, rows, rp, name=f"candidate-{idx}")
    raise IndexError(index)


# ---------------------------------------------------------------------------
# modal axiom suites

# metavariables: P0 = alpha, P1 = alpha', P2 = alpha_1, P3 = alpha'_1 (or a
# third fusion operand), Q0 = beta, Q1 = beta'


@dataclass(frozen=True)
class Axiom:
    name: str
    system: str
    conclusion: tuple
    premises: tuple = ()

    def text(self) -> str:
        c = f"{self.conclusion[0]} |- {self.conclusion[1]}"
        if not self.premises:
            return c
        return " ; ".join(f"{a} |- {b}" for a, b in self.premises) + " => " + c


AXIOMS = (
    Axiom("unit of residuation", "ml2", ("P0", "[d]<u>P0")),
    Axiom("counit of residuation", "ml2", ("<u>[d]Q0", "Q0")),
    Axiom("D-axiom, first sort", "ml2", ("[d]Q0", "<d>Q0")),
    Axiom("D-axiom, second sort", "ml2", ("[u]P0", "<u>P0")),
    Axiom("box-down of top", "ml2", ("top@1", "[d]top@2")),
    Axiom("box-up of top", "ml2", ("top@2", "[u]top@1")),
    Axiom("box-up monotone", "ml2", ("[u]P0", "[u]P1"), (("P0", "P1"),)),
    Axiom("box-down monotone", "ml2", ("[d]Q0", "[d]Q1"), (("Q0", "Q1"),)),
    Axiom("box-up meets", "ml2", ("[u]P0 & [u]P1", "[u](P0 & P1)")),
    Axiom("box-down meets", "ml2", ("[d]Q0 & [d]Q1", "[d](Q0 & Q1)")),
    Axiom("fusion monotone", "nfl", ("P0 * P1", "P2 * P3"), (("P0", "P2"), ("P1", "P3"))),
    Axiom("right residual counit", "nfl", ("P0 * (P0 -> P1)", "P1")),
    Axiom("right residual unit", "nfl", ("P1", "P0 -> (P0 * P1)")),
    Axiom("right residual monotone", "nfl", ("P2 -> P3", "P0 -> P1"), (("P0", "P2"), ("P3", "P1"))),
    Axiom("left residual unit", "nfl", ("P1", "(P1 * P0) <- P0")),
    Axiom("left residual counit", "nfl", ("(P1 <- P0) * P0", "P1")),
    Axiom("left residual monotone", "nfl", ("P0 <- P1", "P2 <- P3"), (("P0", "P2"), ("P3", "P1"))),
    Axiom("associativity, left to right", "fl", ("P0 * (P2 * P3)", "(P0 * P2) * P3")),
    Axiom("associativity, right to left", "fl", ("(P0 * P2) * P3", "P0 * (P2 * P3)")),
    Axiom("commutativity", "bci", ("P0 * P1", "P1 * P0")),
    Axiom("contraction", "bcw", ("P0 & P1", "P0 * P1")),
    Axiom("controlled weakening", "bck", ("[d]Q0 * [d]Q1", "[d]Q1")),
)

# the two left-residual schemes exactly as they are usually printed; they
# are not valid on every frame and are kept for the separating checks
LITERAL_LEFT_RESIDUAL = (
    Axiom("left residual unit, literal", "nfl", ("P1", "(P0 * P1) <- P0")),
    Axiom("left residual monotone, literal", "nfl", ("P0 <- P1", "P2 <- P3"), (("P2", "P0"), ("P1", "P3"))),
)
UNGUARDED_WEAKENING = Axiom("unguarded weakening", "bck", ("P0 * P1", "P1"))

SYSTEM_PARENTS = {"ml2": (), "nfl": ("ml2",), "fl": ("nfl",), "bci": ("fl",), "bcw": ("bci",), "bck": ("bci",)}


def systems_of(cls: str) -> list:
    out, todo = [], [cls.lower()]
    while todo:
        s = todo.pop()
        if s not in out:
            out.append(s)
            todo.extend(SYSTEM_PARENTS[s])
    return out


def axioms_for(cls: str) -> list:
    systems = set(systems_of(cls))
    return [a for a in AXIOMS if a.system in systems]


class _AxiomChecker:
    def __init__(self, ax: Axiom):
        self.axiom = ax
        self.prog = Program()
        self.seqs = []
        for lhs, rhs in ax.premises + (ax.conclusion,):
            a, sa = parse_ml2(lhs)
            b, sb = parse_ml2(rhs)
            if sa != sb:
                raise ValueError(f"ill-sorted sequent in {ax.name}")
            self.seqs.append((self.prog.ml2(a), self.prog.ml2(b), sa))
        self.px = max(self.prog.x_atoms, default=-1) + 1
        self.qy = max(self.prog.y_atoms, default=-1) + 1

    def interpretations(self, frame, limit, rng):
        nx, ny = frame.nx, frame.ny
        total = (1 << nx) ** self.px * (1 << ny) ** self.qy
        if total <= limit:
            ranges = [range(1 << nx)] * self.px + [range(1 << ny)] * self.qy
            for combo in product(*ranges):
                yield list(combo[:self.px]), list(combo[self.px:])
        else:
            for _ in range(limit):
                yield ([rng.randrange(1 << nx) for _ in range(self.px)],
                       [rng.randrange(1 << ny) for _ in range(self.qy)])

    def first_violation(self, frame, limit, rng):
        """None, or (P masks, Q masks, witness name) for the first
        interpretation where the premises hold and the conclusion fails."""
        k = frame.kernel
        code = self.prog.code
        for px, qy in self.interpretations(frame, limit, rng):
            v = k.run(code, px, qy)
            held = [not v[a] & ~v[b] for a, b, _ in self.seqs]
            if all(held[:-1]) and not held[-1]:
                a, b, s = self.seqs[-1]
                d = v[a] & ~v[b]
                pts = frame.X if s == 1 else frame.Y
                return px, qy, pts[(d & -d).bit_length() - 1]
        return None


@dataclass
class AxiomResult:
    axiom: Axiom
    frames: int = 0
    violations: int = 0
    first: tuple | None = None  # (frame name, P masks, Q masks, witness)

    @property
    def valid(self) -> bool:
        return self.violations == 0


@dataclass
class AxiomReport:
    cls: str
    budget: SearchBudget
    frames: int = 0
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.valid for r in self.results)

    def lines(self) -> list:
        out = [f"class: {self.cls}", f"bound: {self.budget.summary()}", f"frames: {self.frames}"]
        for r in self.results:
            tail = ""
            if r.first:
                tail = f" (first on {r.first[0]} at {r.first[3]})"
            out.append(f"{r.axiom.system} {r.axiom.name}: "
                       f"{'valid' if r.valid else 'VIOLATED'} on {r.frames} frames{tail}")
        out.append(f"verdict: {'pass' if self.passed else 'FAIL'}")
        return out


def _check_axioms(axioms, frames, budget):
    results = []
    for ax in axioms:
        chk = _AxiomChecker(ax)
        res = AxiomResult(ax)
        for idx, fr in frames:
            rng = random.Random(f"axiom:{budget.seed}:{idx}:{ax.name}")
            res.frames += 1
            hit = chk.first_violation(fr, budget.max_interpretations, rng)
            if hit is not None:
                res.violations += 1
                if res.first is None:
                    res.first = (fr.name, hit[0], hit[1], hit[2])
        results.append(res)
    return results


def check_axiom_suite(cls: str, budget: SearchBudget | None = None, axioms=None) -> AxiomReport:
    """Check every modal axiom of the class's system (and of the systems it
    extends) on every frame of the class in the budget."""
    budget = budget or SearchBudget()
    frames = list(stream(budget, cls))
    rep = AxiomReport(cls, budget, len(frames))
    rep.results = _check_axioms(axioms if axioms is not None else axioms_for(cls), frames, budget)
    return rep


# ---------------------------------------------------------------------------
# substructural laws on stable sets

SUB_LAWS_ALWAYS = {
    "stable residuation": algebra.law_stable_residuation,
}
# hold wherever residuals of stable sets are stable, not on every frame
SUB_LAWS_DIAGNOSTIC = {
    "residuals preserve stability": algebra.law_residuals_stable,
    "fusion distributes over joins": algebra.law_overt_distributes,
}
SUB_LAWS_BY_CONDITION = {
    "C1": ("associativity", algebra.law_overt_associative),
    "C2": ("commutativity", algebra.law_overt_commutative),
    "C3": ("thinning", algebra.law_overt_thinning),
    "C4": ("contraction", algebra.law_overt_contractive),
}


def check_sub_laws(cls: str, budget: SearchBudget | None = None) -> list:
    """``(law, frames, violations, first failing frame)`` for the residuation
    laws and the class laws of stable-set fusion."""
    budget = budget or SearchBudget()
    laws = dict(SUB_LAWS_ALWAYS)
    for c in class_conditions(cls):
        name, fn = SUB_LAWS_BY_CONDITION[c]
        laws[name] = fn
    rows = {name: [name, 0, 0, None] for name in laws}
    for _, fr in stream(budget, cls):
        ctx = algebra.SetOpsContext(fr)
        for name, fn in laws.items():
            res = fn(ctx)
            row = rows[name]
            row[1] += 1
            if not res.holds:
                row[2] += 1
                if row[3] is None:
                    row[3] = fr.name
    return [tuple(r) for r in rows.values()]


# ---------------------------------------------------------------------------
# separating checks


@dataclass
class Separation:
    name: str
    found: bool
    frame: str | None = None
    detail: str = ""

    def line(self) -> str:
        if self.found:
            return f"{self.name}: separated on {self.frame} ({self.detail})"
        return f"{self.name}: NOT separated"


def _first_failing(ax: Axiom, frames, budget):
    chk = _AxiomChecker(ax)
    for idx, fr in frames:
        rng = random.Random(f"separate:{budget.seed}:{idx}:{ax.name}")
        hit = chk.first_violation(fr, budget.max_interpretations, rng)
        if hit is not None:
            return fr, hit
    return None, None


def separating_checks(budget: SearchBudget | None = None) -> list:
    """Frames showing that class restrictions matter:

    * contraction fails on some frame without (C4);
    * weakening without the box guard fails on some (C3) frame;
    * distribution fails on the three-point diamond frame;
    * the literal left-residual schemes fail on some frame.
    """
    from .fixtures import fixture

    budget = budget or SearchBudget()
    out = []
    no_c4 = [(i, f) for i, f in stream(budget, "nfl") if not f.check_condition("C4").holds]
    c3 = [(i, f) for i, f in stream(budget, "nfl") if f.check_condition("C3").holds]
    contraction = next(a for a in AXIOMS if a.name == "contraction")
    for name, ax, frames in (
        ("contraction needs C4", contraction, no_c4),
        ("weakening needs the box guard", UNGUARDED_WEAKENING, c3),
        *((f"{a.name} is not sound", a, [(i, f) for i, f in stream(budget, "nfl")]) for a in LITERAL_LEFT_RESIDUAL),
    ):
        fr, hit = _first_failing(ax, frames, budget)
        if fr is None:
            out.append(Separation(name, False))
        else:
            out.append(Separation(name, True, fr.name, f"witness {hit[2]}"))
    fm3 = fixture("fm3")
    lhs, rhs = parse_sequent("(p0 | p1) & p2 |- (p0 & p2) | (p1 & p2)")
    chk = _SequentChecker(lhs, rhs, cross_check=True)
    hit, _ = chk.scan(fm3)
    if hit is None:
        out.append(Separation("distribution fails on the diamond frame", False))
    else:
        val, wi = hit
        vs = " ".join(f"p{i}={{{','.join(fm3.names_x(m))}}}" for i, m in sorted(val.items()))
        out.append(Separation("distribution fails on the diamond frame", True, "fm3",
                              f"{vs}, witness {fm3.X[wi]}"))
    return out


__all__ = [
    "CLASSES", "SearchBudget", "Countermodel", "NoCounterexample", "NoCounterexampleUpToBound",
    "RouteDisagreement", "enumerate_frames", "stream", "monoid_frame", "find_countermodel",
    "Axiom", "AXIOMS", "LITERAL_LEFT_RESIDUAL", "UNGUARDED_WEAKENING", "axioms_for",
    "check_axiom_suite", "AxiomReport", "check_sub_laws", "separating_checks", "semigroup_tables", "d_gals",
]
