"""Finite residuated lattices and their canonical frames.

A lattice is given by its elements, an order, and the fusion table; the two
residuals may be given or derived from fusion.  The canonical frame has the
proper filters as X, the proper ideals as Y, ``x gal y`` iff the two meet and
``x R z z'`` iff the filter generated by the pairwise products of ``z`` and
``z'`` is proper and contained in ``x``.

Subsets of the lattice are bitmasks over element indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from itertools import permutations, product

from . import algebra
from .frame import Frame, bits, popcount


class LatticeError(ValueError):
    """A lattice law fails; ``law`` names it and ``witness`` holds elements."""

    def __init__(self, law, witness=(), line=None):
        self.law = law
        self.witness = tuple(witness)
        self.line = line
        msg = f"{law} fails" + (f" at ({', '.join(map(str, self.witness))})" if self.witness else "")
        if line is not None:
            msg = f"line {line}: {msg}"
        super().__init__(msg)


@dataclass(frozen=True, eq=False)
class FiniteResiduatedLattice:
    """Validated lattice; build it with ``validate_lattice``.

    ``up[a]`` is the mask of elements above ``a``.  ``rimp[a][c]`` is ``a -> c``
    and ``limp[c][b]`` is ``c <- b``.
    """

    elements: tuple
    up: tuple
    meet: tuple
    join: tuple
    fuse: tuple
    rimp: tuple
    limp: tuple
    bottom: int
    top: int
    name: str | None = None

    @property
    def n(self) -> int:
        return len(self.elements)

    def le(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    def index(self, e) -> int:
        if isinstance(e, int):
            return e
        return self.elements.index(e)

    def down(self, a: int) -> int:
        return sum(1 << b for b in range(self.n) if self.le(b, a))

    def names(self, mask: int) -> list:
        return [self.elements[i] for i in bits(mask)]

    @cached_property
    def properties(self) -> dict:
        """Which structural laws the fusion satisfies."""
        r = range(self.n)
        f, le, m = self.fuse, self.le, self.meet
        return {
            "associative": all(f[f[a][b]][c] == f[a][f[b][c]] for a in r for b in r for c in r),
            "exchange": all(f[a][b] == f[b][a] for a in r for b in r),
            "weakening": all(le(f[b][a], a) for a in r for b in r),
            "contraction": all(le(m[a][b], f[a][b]) for a in r for b in r),
            "integral": all(le(f[a][b], m[a][b]) for a in r for b in r),
        }

    def encoding(self):
        return (self.elements, self.up, self.fuse)


# ---------------------------------------------------------------------------
# validation


def _closure(n, pairs):
    le = [[a == b for b in range(n)] for a in range(n)]
    for a, b in pairs:
        le[a][b] = True
    for k in range(n):
        for a in range(n):
            if le[a][k]:
                for b in range(n):
                    if le[k][b]:
                        le[a][b] = True
    return le


def _bound(n, le, a, b, lower):
    common = [c for c in range(n) if (le[c][a] and le[c][b] if lower else le[a][c] and le[b][c])]
    for c in common:
        if all((le[d][c] if lower else le[c][d]) for d in common):
            return c
    return None


def validate_lattice(elements, leq, fuse, rimp=None, limp=None, name=None) -> FiniteResiduatedLattice:
    """Check all lattice and residuation laws exhaustively.

    ``leq`` is an iterable of ``(a, b)`` pairs whose reflexive-transitive
    closure is the order.  ``fuse``, ``rimp`` and ``limp`` map element pairs
    to elements (dicts keyed by pairs, or square tables); missing residuals
    are derived as joins of the sets they must be the maximum of.
    """
    elements = tuple(str(e) for e in elements)
    n = len(elements)
    if n == 0:
        raise LatticeError("non-empty carrier")
    if len(set(elements)) != n:
        raise LatticeError("distinct elements")
    idx = {e: i for i, e in enumerate(elements)}

    def ix(e):
        if isinstance(e, int) and not isinstance(e, bool) and 0 <= e < n:
            return e
        if e in idx:
            return idx[e]
        raise LatticeError("known element", (e,))

    le = _closure(n, [(ix(a), ix(b)) for a, b in leq])
    for a in range(n):
        for b in range(a + 1, n):
            if le[a][b] and le[b][a]:
                raise LatticeError("antisymmetry", (elements[a], elements[b]))
    bottoms = [a for a in range(n) if all(le[a][b] for b in range(n))]
    tops = [a for a in range(n) if all(le[b][a] for b in range(n))]
    if not bottoms:
        raise LatticeError("existence of a bottom element")
    if not tops:
        raise LatticeError("existence of a top element")
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            m, j = _bound(n, le, a, b, True), _bound(n, le, a, b, False)
            if m is None:
                raise LatticeError("existence of meets", (elements[a], elements[b]))
            if j is None:
                raise LatticeError("existence of joins", (elements[a], elements[b]))
            meet[a][b], join[a][b] = m, j

    def table(t, what):
        out = [[None] * n for _ in range(n)]
        if isinstance(t, dict):
            for (a, b), c in t.items():
                out[ix(a)][ix(b)] = ix(c)
        else:
            rows = list(t)
            if len(rows) != n or any(len(r) != n for r in rows):
                raise LatticeError(f"{what} table is square")
            for a, row in enumerate(rows):
                for b, c in enumerate(row):
                    out[a][b] = ix(c)
        for a in range(n):
            for b in range(n):
                if out[a][b] is None:
                    raise LatticeError(f"{what} table is total", (elements[a], elements[b]))
        return out

    f = table(fuse, "fuse")

    def big_join(items):
        acc = bottoms[0]
        for c in items:
            acc = join[acc][c]
        return acc

    if rimp is None:
        ri = [[big_join(b for b in range(n) if le[f[a][b]][c]) for c in range(n)] for a in range(n)]
    else:
        ri = table(rimp, "rimp")
    if limp is None:
        li = [[big_join(a for a in range(n) if le[f[a][b]][c]) for b in range(n)] for c in range(n)]
    else:
        li = table(limp, "limp")

    for a, b, c in product(range(n), repeat=3):
        x = le[f[a][b]][c]
        if x != le[b][ri[a][c]]:
            raise LatticeError("residuation (right)", (elements[a], elements[b], elements[c]))
        if x != le[a][li[c][b]]:
            raise LatticeError("residuation (left)", (elements[a], elements[b], elements[c]))
    z = bottoms[0]
    for a in range(n):
        if f[a][z] != z or f[z][a] != z:
            raise LatticeError("absorption by the bottom element", (elements[a],))
    up = tuple(sum(1 << b for b in range(n) if le[a][b]) for a in range(n))

    def frz(t):
        return tuple(tuple(r) for r in t)

    return FiniteResiduatedLattice(elements, up, frz(meet), frz(join), frz(f), frz(ri), frz(li),
                                   bottoms[0], tops[0], name)


# ---------------------------------------------------------------------------
# lattice files


def parse_lattice_text(text: str, name=None) -> FiniteResiduatedLattice:
    """Read the ``lattice ... end`` block format.

    ``leq a b c`` declares the chain ``a <= b <= c``; ``fuse a b = c``,
    ``rimp a b = c`` (a -> b) and ``limp a b = c`` (a <- b) fill the tables.
    """
    elems = None
    leq, tables = [], {"fuse": {}, "rimp": {}, "limp": {}}
    started = ended = False
    last = 1
    for lineno, raw in enumerate(text.splitlines(), 1):
        last = lineno
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if ended:
            raise LatticeError("nothing after 'end'", line=lineno)
        if not started:
            if words[0] != "lattice" or len(words) > 2:
                raise LatticeError("a lattice file starts with 'lattice [name]'", line=lineno)
            started = True
            if len(words) == 2 and name is None:
                name = words[1]
            continue
        head = words[0]
        if head == "elems":
            if elems is not None:
                raise LatticeError("single 'elems' line", line=lineno)
            elems = words[1:]
        elif head == "leq":
            if len(words) < 3:
                raise LatticeError("'leq' lists at least two elements", line=lineno)
            leq.extend((a, b, lineno) for a, b in zip(words[1:], words[2:]))
        elif head in tables:
            if len(words) != 5 or words[3] != "=":
                raise LatticeError(f"'{head} a b = c' syntax", line=lineno)
            key = (words[1], words[2])
            if key in tables[head]:
                raise LatticeError(f"single {head} entry per pair", key, line=lineno)
            tables[head][key] = (words[4], lineno)
        elif line == "end":
            ended = True
        else:
            raise LatticeError(f"known directive (got {head!r})", line=lineno)
    if not started:
        raise LatticeError("non-empty lattice file", line=1)
    if not ended:
        raise LatticeError("closing 'end'", line=last)
    if elems is None:
        raise LatticeError("an 'elems' line", line=last)
    known = set(elems)
    for a, b, ln in leq:
        for e in (a, b):
            if e not in known:
                raise LatticeError("known element", (e,), line=ln)
    for head, t in tables.items():
        for (a, b), (c, ln) in t.items():
            for e in (a, b, c):
                if e not in known:
                    raise LatticeError("known element", (e,), line=ln)
    plain = {h: {k: v for k, (v, _) in t.items()} for h, t in tables.items()}
    return validate_lattice(elems, [(a, b) for a, b, _ in leq], plain["fuse"],
                            plain["rimp"] or None, plain["limp"] or None, name=name)


def load_lattice(path) -> FiniteResiduatedLattice:
    with open(path, encoding="utf-8") as fh:
        return parse_lattice_text(fh.read())


def lattice_to_text(L: FiniteResiduatedLattice, residuals=True) -> str:
    e = L.elements
    lines = [f"lattice {L.name}" if L.name else "lattice", "elems " + " ".join(e)]
    for a in range(L.n):
        for b in range(L.n):
            # covering pairs only
            if a != b and L.le(a, b) and not any(
                    c not in (a, b) and L.le(a, c) and L.le(c, b) for c in range(L.n)):
                lines.append(f"leq {e[a]} {e[b]}")
    for a in range(L.n):
        for b in range(L.n):
            lines.append(f"fuse {e[a]} {e[b]} = {e[L.fuse[a][b]]}")
    if residuals:
        for a in range(L.n):
            for b in range(L.n):
                lines.append(f"rimp {e[a]} {e[b]} = {e[L.rimp[a][b]]}")
        for a in range(L.n):
            for b in range(L.n):
                lines.append(f"limp {e[a]} {e[b]} = {e[L.limp[a][b]]}")
    lines.append("end")
    return "\n".join(lines) + "\n"


NAMED = ("chain2_boolean", "chain3_godel", "m3_zero", "luk5", "grid23_heyting")


def named_lattice(name: str) -> FiniteResiduatedLattice:
    if name not in NAMED:
        raise KeyError(f"unknown lattice {name!r}; known: {', '.join(NAMED)}")
    text = resources.files("polarframes").joinpath("data", f"{name}.lattice").read_text(encoding="utf-8")
    return parse_lattice_text(text, name=name)


# ---------------------------------------------------------------------------
# filters and ideals


def is_filter(L, mask: int) -> bool:
    if not mask:
        return False
    for a in bits(mask):
        if L.up[a] & ~mask:
            return False
        for b in bits(mask):
            if not mask >> L.meet[a][b] & 1:
                return False
    return True


def is_ideal(L, mask: int) -> bool:
    if not mask:
        return False
    for a in bits(mask):
        if L.down(a) & ~mask:
            return False
        for b in bits(mask):
            if not mask >> L.join[a][b] & 1:
                return False
    return True


def generated_filter(L, mask: int) -> int:
    """Smallest filter containing the elements of ``mask`` (empty ``mask``
    gives the filter ``{top}``)."""
    m = L.top
    for a in bits(mask):
        m = L.meet[m][a]
    return L.up[m]


def generated_ideal(L, mask: int) -> int:
    j = L.bottom
    for a in bits(mask):
        j = L.join[j][a]
    return L.down(j)


def filters(L) -> list:
    """Proper filters, one per non-bottom element, in element order.

    A filter of a finite lattice contains the meet of its members, so it is
    the principal filter of that meet.
    """
    out = []
    for a in range(L.n):
        m = generated_filter(L, 1 << a)
        if not m >> L.bottom & 1 and m not in out:
            out.append(m)
    return out


def ideals(L) -> list:
    out = []
    for a in range(L.n):
        m = generated_ideal(L, 1 << a)
        if not m >> L.top & 1 and m not in out:
            out.append(m)
    return out


def point_fuse(L, z: int, z2: int):
    """Filter generated by the products ``a * b`` (a in z, b in z2), and
    whether it is proper."""
    prods = 0
    for a in bits(z):
        for b in bits(z2):
            prods |= 1 << L.fuse[a][b]
    g = generated_filter(L, prods)
    return g, not g >> L.bottom & 1


# ---------------------------------------------------------------------------
# canonical frame


def _least(L, mask):
    m = L.top
    for a in bits(mask):
        m = L.meet[m][a]
    return m


def _greatest(L, mask):
    j = L.bottom
    for a in bits(mask):
        j = L.join[j][a]
    return j


@dataclass
class CanonicalFrame:
    lattice: FiniteResiduatedLattice
    frame: Frame
    filters: list
    ideals: list


def canonical_frame(L: FiniteResiduatedLattice, backend=None) -> CanonicalFrame:
    """Frame of proper filters and ideals.  Filters are named ``f_<least
    element>`` and ideals ``i_<greatest element>``."""
    if L.n < 2:
        raise LatticeError("at least two elements for a canonical frame")
    fs, ids = filters(L), ideals(L)
    if not fs or not ids:
        raise LatticeError("existence of proper filters and ideals")
    e = L.elements
    xn = [f"f_{e[_least(L, m)]}" for m in fs]
    yn = [f"i_{e[_greatest(L, m)]}" for m in ids]
    gal = [(xn[i], yn[j]) for i, f in enumerate(fs) for j, d in enumerate(ids) if f & d]
    r111 = []
    for (zi, z), (wi, w) in product(enumerate(fs), repeat=2):
        g, proper = point_fuse(L, z, w)
        if not proper:
            continue
        for xi, x in enumerate(fs):
            if not g & ~x:
                r111.append((xn[xi], xn[zi], xn[wi]))
    fr = Frame(xn, yn, gal, r111, name=f"canonical({L.name})" if L.name else "canonical", backend=backend)
    return CanonicalFrame(L, fr, fs, ids)


def represent(L, a, cf: CanonicalFrame | None = None) -> int:
    """Mask of the proper filters containing ``a``; asserted stable."""
    cf = cf or canonical_frame(L)
    a = L.index(a)
    m = sum(1 << i for i, f in enumerate(cf.filters) if f >> a & 1)
    if cf.frame.kernel.closure_x(m) != m:
        raise AssertionError(f"representation of {L.elements[a]} is not stable")
    return m


@dataclass(frozen=True)
class Check:
    name: str
    holds: bool
    witness: tuple = ()


@dataclass
class EmbeddingReport:
    lattice: str
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.holds for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.holds]

    def lines(self) -> list:
        out = [f"lattice: {self.lattice}"]
        for k, v in self.info.items():
            out.append(f"{k}: {v}")
        for c in self.checks:
            tail = "" if c.holds else f" (witness {' '.join(map(str, c.witness))})"
            out.append(f"{c.name}: {'pass' if c.holds else 'FAIL'}{tail}")
        out.append(f"verdict: {'pass' if self.passed else 'FAIL'}")
        return out


def verify_embedding(L: FiniteResiduatedLattice, backend=None) -> EmbeddingReport:
    """Check that ``represent`` is an injective homomorphism onto stable sets
    and that the frame conditions of the canonical frame match the algebra."""
    cf = canonical_frame(L, backend)
    fr, k = cf.frame, cf.frame.kernel
    ctx = algebra.SetOpsContext(fr)
    e = L.elements
    alpha = [represent(L, a, cf) for a in range(L.n)]
    rep = EmbeddingReport(L.name or "lattice")
    rep.info["elements"] = L.n
    rep.info["filters"] = len(cf.filters)
    rep.info["ideals"] = len(cf.ideals)
    rep.info["triples"] = len(fr.r111)

    def check(name, pairs, bad):
        for t in pairs:
            if bad(*t):
                rep.checks.append(Check(name, False, tuple(e[i] for i in t)))
                return
        rep.checks.append(Check(name, True))

    r = range(L.n)
    pairs = list(product(r, r))
    check("injective", pairs, lambda a, b: a != b and alpha[a] == alpha[b])
    check("meet", pairs, lambda a, b: alpha[L.meet[a][b]] != alpha[a] & alpha[b])
    check("join", pairs, lambda a, b: alpha[L.join[a][b]] != ctx.join(alpha[a], alpha[b]))
    check("fuse", pairs, lambda a, b: alpha[L.fuse[a][b]] != algebra.overt(ctx, alpha[a], alpha[b]))
    check("rimp", pairs, lambda a, b: alpha[L.rimp[a][b]] != algebra.sres_r(ctx, alpha[a], alpha[b]))
    check("limp", pairs, lambda b, a: alpha[L.limp[b][a]] != algebra.sres_l(ctx, alpha[b], alpha[a]))
    check("bottom and top", [(L.bottom, L.top)],
          lambda z, t: alpha[z] != 0 or alpha[t] != k.full_x)

    # canonical frame shape
    nf = len(cf.filters)
    pol = [k.polar_right(1 << i) for i in range(nf)]
    check_pts = [(i, j) for i in range(nf) for j in range(nf) if i < j]
    bad_sep = [(i, j) for i, j in check_pts if pol[i] == pol[j]]
    rep.checks.append(Check("separated", not bad_sep, tuple(fr.X[i] for i in bad_sep[:1][0]) if bad_sep else ()))
    incr = True
    for i, j in product(range(nf), repeat=2):
        if not cf.filters[i] & ~cf.filters[j] and pol[i] & ~pol[j]:
            incr = False
    nd = len(cf.ideals)
    for i, j in product(range(nd), repeat=2):
        if not cf.ideals[i] & ~cf.ideals[j] and k.gal_cols[i] & ~k.gal_cols[j]:
            incr = False
    rep.checks.append(Check("gal increasing", incr))
    nz = [a for a in r if a != L.bottom]

    def principal_bad(a, b):
        g, proper = point_fuse(L, L.up[a], L.up[b])
        return g != L.up[L.fuse[a][b]]

    check("principal filters preserved", list(product(nz, nz)), principal_bad)

    props = L.properties
    conds = fr.conditions()
    for c, law in (("C2", "exchange"), ("C3", "weakening"), ("C4", "contraction")):
        rep.checks.append(Check(f"{c} iff {law}", conds[c] == props[law], (f"{c}={conds[c]}", f"{law}={props[law]}")))
    rep.checks.append(Check("associative implies C1", conds["C1"] or not props["associative"]))
    rep.info["associative"] = props["associative"]
    rep.info["C1"] = conds["C1"]
    rep.info["classes"] = " ".join(fr.classify())
    return rep


# ---------------------------------------------------------------------------
# catalog search


def _order_is_lattice(n, le):
    for a in range(n):
        for b in range(n):
            if _bound(n, le, a, b, True) is None or _bound(n, le, a, b, False) is None:
                return False
    return True


def lattice_orders(n: int) -> list:
    """Lattice orders on ``n`` elements up to isomorphism.

    Element 0 is the bottom and element ``n-1`` the top; each order is a tuple
    of up-set masks.  Candidates are all relations among the middle
    elements, kept when they are partial orders forming a lattice, and
    deduplicated under permutations of the middle elements.
    """
    if n < 1:
        return []
    if n == 1:
        return [(1,)]
    mid = list(range(1, n - 1))
    slots = [(a, b) for a in mid for b in mid if a != b]
    seen, out = set(), []
    for choice in product((False, True), repeat=len(slots)):
        pairs = [(0, a) for a in range(n)] + [(a, n - 1) for a in range(n)]
        pairs += [s for s, on in zip(slots, choice) if on]
        le = _closure(n, pairs)
        # the closure must not add relations beyond the chosen ones
        if any(le[a][b] != on for (a, b), on in zip(slots, choice)):
            continue
        if any(le[a][b] and le[b][a] for a in range(n) for b in range(n) if a != b):
            continue
        if not _order_is_lattice(n, le):
            continue
        ups = tuple(sum(1 << b for b in range(n) if le[a][b]) for a in range(n))
        canon = max(_relabel(ups, (0,) + p + (n - 1,)) for p in permutations(mid))
        if canon in seen:
            continue
        seen.add(canon)
        out.append(canon)
    return sorted(out, key=lambda u: (sum(popcount(m) for m in u), u), reverse=True)


def _relabel(ups, perm):
    """Up-sets after renaming element ``i`` to ``perm[i]``."""
    n = len(ups)
    out = [0] * n
    for a in range(n):
        out[perm[a]] = sum(1 << perm[b] for b in range(n) if ups[a] >> b & 1)
    return tuple(out)


def _default_names(n):
    if n == 1:
        return ("0",)
    inner = [chr(ord("a") + i) for i in range(n - 2)]
    return ("0", *inner, "1")


def residuated_fusions(ups) -> list:
    """All fusion tables on the given lattice order that preserve finite
    joins (including the empty join) in each argument, found by backtracking
    over the entries; these are exactly the residuated ones."""
    n = len(ups)
    le = [[bool(ups[a] >> b & 1) for b in range(n)] for a in range(n)]
    join = [[_bound(n, le, a, b, False) for b in range(n)] for a in range(n)]
    cells = [(a, b) for a in range(1, n) for b in range(1, n)]
    table = [[0] * n for _ in range(n)]
    # constraints f(a v b, c) = f(a, c) v f(b, c) and mirror, checked once all cells are set
    cons = []
    for a in range(n):
        for b in range(n):
            j = join[a][b]
            for c in range(n):
                cons.append(((j, c), (a, c), (b, c)))
                cons.append(((c, j), (c, a), (c, b)))
    by_cell = {cell: [] for cell in cells}
    order = {cell: i for i, cell in enumerate(cells)}
    for con in cons:
        live = [p for p in con if p in order]
        if live:
            by_cell[max(live, key=order.__getitem__)].append(con)
    out = []

    def rec(i):
        if i == len(cells):
            out.append(tuple(tuple(r) for r in table))
            return
        a, b = cells[i]
        for v in range(n):
            table[a][b] = v
            if all(table[t[0]][t[1]] == join[table[u[0]][u[1]]][table[w[0]][w[1]]] for t, u, w in by_cell[(a, b)]):
                rec(i + 1)
        table[a][b] = 0

    rec(0)
    return out


def catalog(max_size: int = 4, min_size: int = 2):
    """Every residuated lattice with ``min_size..max_size`` elements: each
    lattice order up to isomorphism with each residuated fusion table."""
    for n in range(min_size, max_size + 1):
        names = _default_names(n)
        for k, ups in enumerate(lattice_orders(n)):
            leq = [(names[a], names[b]) for a in range(n) for b in range(n) if a != b and ups[a] >> b & 1]
            shape = "chain" if all(popcount(u) == n - a for a, u in enumerate(ups)) else f"order{k}"
            for t, f in enumerate(residuated_fusions(ups)):
                fuse = {(names[a], names[b]): names[f[a][b]] for a in range(n) for b in range(n)}
                yield validate_lattice(names, leq, fuse, name=f"n{n}-{shape}-{t}")
