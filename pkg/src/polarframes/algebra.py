"""Set operators induced by the ternary relation.

Powerset level (any subsets of X): ``odot`` with residuals ``rres`` and
``lres``.  Stable level: ``overt`` (closure of ``odot``), its Galois dual
``overt_dual`` on co-stable sets, and the residuals ``sres_r``/``sres_l``.

The ``law_*`` functions check an algebraic law exhaustively on one frame and
return a ``LawResult`` carrying the first counterexample tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import config
from .frame import Frame, FrameError, bits


class StabilityError(FrameError):
    """An operator defined on stable sets received a non-stable argument."""


class SetOpsContext:
    """A frame together with its cached stable and co-stable sets."""

    __slots__ = ("frame", "k", "_stable", "_stable_set", "_costable", "_costable_set")

    def __init__(self, frame: Frame):
        self.frame = frame
        self.k = frame.kernel
        self._stable = None
        self._stable_set = None
        self._costable = None
        self._costable_set = None

    @property
    def stable(self) -> list:
        if self._stable is None:
            self._stable = self.frame.stable_sets()
            self._stable_set = frozenset(self._stable)
        return self._stable

    @property
    def costable(self) -> list:
        if self._costable is None:
            self._costable = self.frame.costable_sets()
            self._costable_set = frozenset(self._costable)
        return self._costable

    def require_stable(self, m, what):
        if self.k.closure_x(m) != m:
            raise StabilityError(f"{what}: {self.frame.names_x(m)} is not a stable set")

    def require_costable(self, m, what):
        if self.k.closure_y(m) != m:
            raise StabilityError(f"{what}: {self.frame.names_y(m)} is not a co-stable set")

    def join(self, a, c):
        """Join of stable sets: closure of the union."""
        return self.k.closure_x(a | c)


def context(obj) -> SetOpsContext:
    if isinstance(obj, SetOpsContext):
        return obj
    if isinstance(obj, Frame):
        return SetOpsContext(obj)
    raise TypeError(f"expected a Frame or SetOpsContext, got {type(obj).__name__}")


# ---------------------------------------------------------------------------
# powerset level


def odot(ctx, U, W) -> int:
    """Image of U x W under the relation: the union of ``R u w``."""
    c = context(ctx)
    return c.k.odot(c.frame.mask_x(U), c.frame.mask_x(W))


def rres(ctx, U, W) -> int:
    """Right residual: points x such that every z in U has ``R z x`` inside W."""
    c = context(ctx)
    return c.k.rres(c.frame.mask_x(U), c.frame.mask_x(W))


def lres(ctx, W, U) -> int:
    """Left residual: points x such that every z in U has ``R x z`` inside W."""
    c = context(ctx)
    return c.k.lres(c.frame.mask_x(W), c.frame.mask_x(U))


# ---------------------------------------------------------------------------
# stable level


def overt(ctx, A, C) -> int:
    """Closure of ``odot`` on stable arguments."""
    c = context(ctx)
    a, cc = c.frame.mask_x(A), c.frame.mask_x(C)
    c.require_stable(a, "overt")
    c.require_stable(cc, "overt")
    return c.k.closure_x(c.k.odot(a, cc))


def overt_dual_meet(ctx, B, D) -> int:
    """Intersection of ``r_dual(u, u')`` over u in the left polar of B and
    u' in the left polar of D."""
    c = context(ctx)
    k = c.k
    r = k.full_y
    for u in bits(k.polar_left(B)):
        for u2 in bits(k.polar_left(D)):
            r &= k.r_dual(u, u2)
    return r


def overt_dual(ctx, B, D) -> int:
    """Galois dual of ``overt`` on co-stable sets of Y."""
    c = context(ctx)
    b, d = c.frame.mask_y(B), c.frame.mask_y(D)
    c.require_costable(b, "overt_dual")
    c.require_costable(d, "overt_dual")
    k = c.k
    r = k.polar_right(k.closure_x(k.odot(k.polar_left(b), k.polar_left(d))))
    if config.DEBUG:
        config.debug_check(r == overt_dual_meet(c, b, d),
                           "overt_dual: polar form differs from intersection form")
    return r


def sres_r_explicit(ctx, A, C) -> int:
    """Right residual on stable sets written with ``r_dual``:
    x such that for all z in A, every y in the right polar of C lies in
    ``r_dual(z, x)``."""
    c = context(ctx)
    k = c.k
    cpol = k.polar_right(C)
    out = 0
    for x in range(k.nx):
        if all(not cpol & ~k.r_dual(z, x) for z in bits(A)):
            out |= 1 << x
    return out


def sres_l_explicit(ctx, C, A) -> int:
    c = context(ctx)
    k = c.k
    cpol = k.polar_right(C)
    out = 0
    for x in range(k.nx):
        if all(not cpol & ~k.r_dual(x, z) for z in bits(A)):
            out |= 1 << x
    return out


def sres_r(ctx, A, C) -> int:
    """Right residual of ``overt``; equals ``rres`` restricted to stable sets."""
    c = context(ctx)
    a, cc = c.frame.mask_x(A), c.frame.mask_x(C)
    c.require_stable(a, "sres_r")
    c.require_stable(cc, "sres_r")
    r = c.k.rres(a, cc)
    if config.DEBUG:
        config.debug_check(c.k.closure_x(r) == r, "sres_r: result is not stable")
        config.debug_check(r == sres_r_explicit(c, a, cc), "sres_r: polar form disagrees")
    return r


def sres_l(ctx, C, A) -> int:
    """Left residual of ``overt``: ``lres(C, A)`` on stable sets."""
    c = context(ctx)
    cc, a = c.frame.mask_x(C), c.frame.mask_x(A)
    c.require_stable(a, "sres_l")
    c.require_stable(cc, "sres_l")
    r = c.k.lres(cc, a)
    if config.DEBUG:
        config.debug_check(c.k.closure_x(r) == r, "sres_l: result is not stable")
        config.debug_check(r == sres_l_explicit(c, cc, a), "sres_l: polar form disagrees")
    return r


# ---------------------------------------------------------------------------
# law checkers


@dataclass(frozen=True)
class LawResult:
    law: str
    holds: bool
    witness: tuple = ()

    def __bool__(self):
        return self.holds


def _first(law, tuples, bad):
    for t in tuples:
        if bad(*t):
            return LawResult(law, False, t)
    return LawResult(law, True)


def _subsets(c):
    return range(c.k.full_x + 1)


def _increasing(c):
    f = c.frame
    return [u for u in _subsets(c) if f.is_increasing_x(u)]


def law_odot_associative(ctx) -> LawResult:
    c = context(ctx)
    k = c.k
    s = _subsets(c)
    return _first("odot associative", product(s, s, s),
                  lambda u, v, w: k.odot(k.odot(u, v), w) != k.odot(u, k.odot(v, w)))


def law_odot_commutative(ctx) -> LawResult:
    c = context(ctx)
    k = c.k
    s = _subsets(c)
    return _first("odot commutative", product(s, s), lambda u, w: k.odot(u, w) != k.odot(w, u))


def law_odot_contractive(ctx) -> LawResult:
    c = context(ctx)
    k = c.k
    s = _subsets(c)
    return _first("odot contractive", product(s, s), lambda u, w: (u & w) & ~k.odot(u, w))


def law_odot_thinning(ctx) -> LawResult:
    """U odot W is inside W for increasing U, W."""
    c = context(ctx)
    k = c.k
    s = _increasing(c)
    return _first("odot thinning on increasing sets", product(s, s), lambda u, w: k.odot(u, w) & ~w)


def law_odot_in_meet(ctx) -> LawResult:
    """U odot W is inside U and W for increasing U, W."""
    c = context(ctx)
    k = c.k
    s = _increasing(c)
    return _first("odot below intersection on increasing sets", product(s, s),
                  lambda u, w: k.odot(u, w) & ~(u & w))


def law_powerset_residuation(ctx) -> LawResult:
    c = context(ctx)
    k = c.k
    s = _subsets(c)

    def bad(u, v, w):
        a = not k.odot(u, v) & ~w
        b = not v & ~k.rres(u, w)
        d = not u & ~k.lres(w, v)
        return not (a == b == d)

    return _first("powerset residuation", product(s, s, s), bad)


def law_overt_associative(ctx) -> LawResult:
    c = context(ctx)
    k = c.k
    s = c.stable

    def ov(a, b):
        return k.closure_x(k.odot(a, b))

    return _first("overt associative", product(s, s, s),
                  lambda a, b, d: ov(ov(a, b), d) != ov(a, ov(b, d)))


def law_overt_commutative(ctx) -> LawResult:
    c = context(ctx)
    k = c.k
    s = c.stable
    return _first("overt commutative", product(s, s),
                  lambda a, b: k.closure_x(k.odot(a, b)) != k.closure_x(k.odot(b, a)))


def law_overt_contractive(ctx) -> LawResult:
    c = context(ctx)
    k = c.k
    s = c.stable
    return _first("overt contractive", product(s, s),
                  lambda a, b: (a & b) & ~k.closure_x(k.odot(a, b)))


def law_overt_thinning(ctx) -> LawResult:
    c = context(ctx)
    k = c.k
    s = c.stable
    return _first("overt thinning", product(s, s), lambda a, b: k.closure_x(k.odot(a, b)) & ~b)


def law_overt_distributes(ctx) -> LawResult:
    """overt preserves binary joins of stable sets in each argument."""
    c = context(ctx)
    k = c.k
    s = c.stable

    def ov(a, b):
        return k.closure_x(k.odot(a, b))

    def bad(a, b, d):
        j = c.join(b, d)
        return ov(a, j) != c.join(ov(a, b), ov(a, d)) or ov(j, a) != c.join(ov(b, a), ov(d, a))

    return _first("overt distributes over joins", product(s, s, s), bad)


def law_stable_residuation(ctx) -> LawResult:
    c = context(ctx)
    k = c.k
    s = c.stable

    def bad(a, f, d):
        x = not k.closure_x(k.odot(a, f)) & ~d
        y = not f & ~k.rres(a, d)
        z = not a & ~k.lres(d, f)
        return not (x == y == z)

    return _first("stable residuation", product(s, s, s), bad)


def law_residuals_stable(ctx) -> LawResult:
    """Residuals of stable sets are stable."""
    c = context(ctx)
    k = c.k
    s = c.stable
    return _first("residuals preserve stability", product(s, s),
                  lambda a, d: k.closure_x(k.rres(a, d)) != k.rres(a, d)
                  or k.closure_x(k.lres(d, a)) != k.lres(d, a))


def law_dual_forms(ctx) -> LawResult:
    """The polar and intersection forms of ``overt_dual`` agree."""
    c = context(ctx)
    k = c.k
    s = c.costable

    def bad(b, d):
        polar = k.polar_right(k.closure_x(k.odot(k.polar_left(b), k.polar_left(d))))
        return polar != overt_dual_meet(c, b, d)

    return _first("overt dual forms agree", product(s, s), bad)


def law_residual_forms(ctx) -> LawResult:
    """``rres``/``lres`` on stable sets agree with their r_dual forms."""
    c = context(ctx)
    k = c.k
    s = c.stable
    return _first("residual forms agree", product(s, s),
                  lambda a, d: k.rres(a, d) != sres_r_explicit(c, a, d)
                  or k.lres(d, a) != sres_l_explicit(c, d, a))


POWERSET_LAWS = {
    "associative": law_odot_associative,
    "commutative": law_odot_commutative,
    "contractive": law_odot_contractive,
    "thinning": law_odot_thinning,
    "meet": law_odot_in_meet,
}
STABLE_LAWS = {
    "associative": law_overt_associative,
    "commutative": law_overt_commutative,
    "contractive": law_overt_contractive,
    "thinning": law_overt_thinning,
}
