"""Finite two-sorted frames.

A frame has point sets X and Y, a relation ``gal`` between them and a ternary
relation ``r111`` on X.  ``I`` is the complement of ``gal`` in X x Y.  Subsets
are handed around as int bitmasks over declaration order; every operator also
accepts an iterable of point names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import config
from .kernels import make_kernel

CONDITIONS = ("C1", "C2", "C3", "C4")
CLASS_CONDITIONS = {
    "NFL": (),
    "FL": ("C1",),
    "BCI": ("C1", "C2"),
    "BCK": ("C1", "C2", "C3"),
    "BCW": ("C1", "C2", "C4"),
}
CLASS_ORDER = ("NFL", "FL", "BCI", "BCK", "BCW")


class FrameError(ValueError):
    """Invalid frame or frame file; ``line`` is set for file errors."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class ConditionResult:
    condition: str
    holds: bool
    witness: tuple = ()

    def __bool__(self):
        return self.holds


def popcount(m: int) -> int:
    return bin(m).count("1")


def bits(m: int):
    i = 0
    while m:
        if m & 1:
            yield i
        m >>= 1
        i += 1


class Frame:
    """Validated two-sorted frame; treat instances as immutable."""

    __slots__ = ("X", "Y", "gal", "r111", "name", "_xi", "_yi", "kernel", "_stable", "_costable")

    def __init__(self, X, Y, gal=(), r111=(), name=None, backend=None):
        X, Y = tuple(X), tuple(Y)
        if not X or not Y:
            raise FrameError("X and Y must be non-empty")
        if len(set(X)) != len(X) or len(set(Y)) != len(Y):
            raise FrameError("duplicate point identifier")
        if set(X) & set(Y):
            raise FrameError(f"X and Y share identifiers: {sorted(set(X) & set(Y))}")
        xi = {p: i for i, p in enumerate(X)}
        yi = {p: i for i, p in enumerate(Y)}
        gal = frozenset(tuple(p) for p in gal)
        r111 = frozenset(tuple(t) for t in r111)
        for a, b in gal:
            if a not in xi or b not in yi:
                raise FrameError(f"gal pair ({a}, {b}) must be an X point and a Y point")
        for t in r111:
            if len(t) != 3 or any(p not in xi for p in t):
                raise FrameError(f"r111 triple {t} must consist of X points")
        nx, ny = len(X), len(Y)
        gal_rows = [0] * nx
        for a, b in gal:
            gal_rows[xi[a]] |= 1 << yi[b]
        rp = [0] * (nx * nx)
        for x, z, z2 in r111:
            rp[xi[z] * nx + xi[z2]] |= 1 << xi[x]
        full_y = (1 << ny) - 1
        for x in range(nx):
            if gal_rows[x] == full_y:
                raise FrameError(f"D-condition fails: {X[x]} is I-related to no point of Y")
        for y in range(ny):
            if all(gal_rows[x] >> y & 1 for x in range(nx)):
                raise FrameError(f"D-condition fails: {Y[y]} is I-related to no point of X")
        self.X = X
        self.Y = Y
        self.gal = gal
        self.r111 = r111
        self.name = name
        self._xi = xi
        self._yi = yi
        self.kernel = make_kernel(nx, ny, gal_rows, rp, backend)
        self._stable = None
        self._costable = None

    @classmethod
    def from_tables(cls, nx, ny, gal_rows, rp, name=None, backend=None):
        """Frame on points ``x0..``/``y0..`` from bitmask tables
        (``rp[z*nx+z2]`` = mask of x with x R z z2)."""
        X = [f"x{i}" for i in range(nx)]
        Y = [f"y{j}" for j in range(ny)]
        gal = [(X[i], Y[j]) for i in range(nx) for j in range(ny) if gal_rows[i] >> j & 1]
        r111 = [
            (X[x], X[z], X[z2])
            for z in range(nx)
            for z2 in range(nx)
            for x in bits(rp[z * nx + z2])
        ]
        return cls(X, Y, gal, r111, name=name, backend=backend)

    def with_r111(self, r111, name=None):
        return Frame(self.X, self.Y, self.gal, r111, name=name, backend=self.kernel.backend)

    # -- conversions
    @property
    def nx(self):
        return len(self.X)

    @property
    def ny(self):
        return len(self.Y)

    @property
    def full_x(self):
        return (1 << len(self.X)) - 1

    @property
    def full_y(self):
        return (1 << len(self.Y)) - 1

    def _mask(self, s, index, full, sort):
        if isinstance(s, int):
            if s < 0 or s & ~full:
                raise FrameError(f"mask {s} is out of range for {sort}")
            return s
        if isinstance(s, str):
            s = [s]
        m = 0
        for p in s:
            if p not in index:
                raise FrameError(f"unknown {sort} point {p!r}")
            m |= 1 << index[p]
        return m

    def mask_x(self, s) -> int:
        return self._mask(s, self._xi, self.full_x, "X")

    def mask_y(self, s) -> int:
        return self._mask(s, self._yi, self.full_y, "Y")

    def names_x(self, m: int) -> list:
        return [self.X[i] for i in bits(m)]

    def names_y(self, m: int) -> list:
        return [self.Y[i] for i in bits(m)]

    def index_of(self, p):
        """``(sort, index)`` of a point; sort is 1 for X and 2 for Y."""
        if p in self._xi:
            return 1, self._xi[p]
        if p in self._yi:
            return 2, self._yi[p]
        raise FrameError(f"unknown point {p!r}")

    def gal_rows(self):
        return self.kernel.gal_rows

    def rp(self):
        return self.kernel.rp

    def relates(self, x, z, z2) -> bool:
        """x R z z2 on indices."""
        return bool(self.kernel.rp[z * self.nx + z2] >> x & 1)

    # -- Galois connection and modalities
    def polar_right(self, U) -> int:
        return self.kernel.polar_right(self.mask_x(U))

    def polar_left(self, V) -> int:
        return self.kernel.polar_left(self.mask_y(V))

    def diamond_up(self, U) -> int:
        return self.kernel.diamond_up(self.mask_x(U))

    def box_down(self, V) -> int:
        return self.kernel.box_down(self.mask_y(V))

    def box_up(self, U) -> int:
        return self.kernel.box_up(self.mask_x(U))

    def diamond_down(self, V) -> int:
        return self.kernel.diamond_down(self.mask_y(V))

    def closure_x(self, U) -> int:
        u = self.mask_x(U)
        r = self.kernel.closure_x(u)
        if config.DEBUG:
            config.debug_check(r == self.kernel.box_down(self.kernel.diamond_up(u)),
                               "closure on X: double polar differs from box of diamond")
        return r

    def closure_y(self, V) -> int:
        v = self.mask_y(V)
        r = self.kernel.closure_y(v)
        if config.DEBUG:
            config.debug_check(r == self.kernel.box_up(self.kernel.diamond_down(v)),
                               "closure on Y: double polar differs from box of diamond")
        return r

    def is_stable(self, U) -> bool:
        u = self.mask_x(U)
        return self.kernel.closure_x(u) == u

    def is_costable(self, V) -> bool:
        v = self.mask_y(V)
        return self.kernel.closure_y(v) == v

    def stable_sets(self, bound=None) -> list:
        """All Galois-stable subsets of X, ordered by size then mask."""
        bound = config.STABLE_SET_BOUND if bound is None else bound
        if self.nx > bound:
            raise FrameError(f"|X| = {self.nx} exceeds the stable-set bound {bound}")
        if self._stable is None:
            self._stable = tuple(self.kernel.stable_sets())
        return list(self._stable)

    def costable_sets(self, bound=None) -> list:
        bound = config.STABLE_SET_BOUND if bound is None else bound
        if self.ny > bound:
            raise FrameError(f"|Y| = {self.ny} exceeds the stable-set bound {bound}")
        if self._costable is None:
            self._costable = tuple(self.kernel.costable_sets())
        return list(self._costable)

    # -- preorder
    def leq_x(self, a: int, b: int) -> bool:
        """a precedes b on X (indices)."""
        g = self.kernel.gal_rows
        return not g[a] & ~g[b]

    def leq_y(self, a: int, b: int) -> bool:
        g = self.kernel.gal_cols
        return not g[a] & ~g[b]

    def preorder(self):
        """Pair of sets of name pairs: the preorders on X and on Y."""
        px = {(self.X[a], self.X[b]) for a in range(self.nx) for b in range(self.nx) if self.leq_x(a, b)}
        py = {(self.Y[a], self.Y[b]) for a in range(self.ny) for b in range(self.ny) if self.leq_y(a, b)}
        return px, py

    def gamma_up(self, u) -> int:
        """Mask of the upset of point ``u`` within its own sort."""
        sort, i = self.index_of(u)
        if sort == 1:
            return sum(1 << b for b in range(self.nx) if self.leq_x(i, b))
        return sum(1 << b for b in range(self.ny) if self.leq_y(i, b))

    def is_increasing_x(self, U) -> bool:
        u = self.mask_x(U)
        return all(self.leq_x(a, b) <= bool(u >> b & 1) for a in bits(u) for b in range(self.nx))

    def r_dual(self, z, z2) -> int:
        zi = self._point_x(z)
        z2i = self._point_x(z2)
        return self.kernel.r_dual(zi, z2i)

    def _point_x(self, p):
        if isinstance(p, int):
            if not 0 <= p < self.nx:
                raise FrameError(f"X index {p} out of range")
            return p
        if p not in self._xi:
            raise FrameError(f"unknown X point {p!r}")
        return self._xi[p]

    # -- relational constraints
    def check_condition(self, c: str) -> ConditionResult:
        checks = {
            "C1": self.kernel.check_c1,
            "C2": self.kernel.check_c2,
            "C3": self.kernel.check_c3,
            "C4": self.kernel.check_c4,
            "C3B": self.kernel.check_c3_boolean,
        }
        key = c.upper()
        if key not in checks:
            raise ValueError(f"unknown condition {c!r}")
        w = checks[key]()
        if w is None:
            return ConditionResult(key, True)
        return ConditionResult(key, False, tuple(self.X[i] for i in w))

    def conditions(self) -> dict:
        return {c: self.check_condition(c).holds for c in CONDITIONS}

    def classify(self) -> list:
        held = self.conditions()
        return [lab for lab in CLASS_ORDER if all(held[c] for c in CLASS_CONDITIONS[lab])]

    def in_class(self, label: str) -> bool:
        label = label.upper()
        if label not in CLASS_CONDITIONS:
            raise ValueError(f"unknown frame class {label!r}")
        return all(self.check_condition(c).holds for c in CLASS_CONDITIONS[label])

    # -- misc
    def encoding(self):
        return (tuple(self.kernel.gal_rows), tuple(self.kernel.rp))

    def __eq__(self, other):
        return (
            isinstance(other, Frame)
            and self.X == other.X
            and self.Y == other.Y
            and self.gal == other.gal
            and self.r111 == other.r111
        )

    def __hash__(self):
        return hash((self.X, self.Y, self.gal, self.r111))

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<Frame{tag} |X|={self.nx} |Y|={self.ny} |gal|={len(self.gal)} |R|={len(self.r111)}>"


# ---------------------------------------------------------------------------
# frame files


@dataclass
class FrameFile:
    frame: Frame
    sub_val: dict = field(default_factory=dict)  # atom index -> X mask
    p_val: dict = field(default_factory=dict)  # sort-1 atom index -> X mask
    q_val: dict = field(default_factory=dict)  # sort-2 atom index -> Y mask


def parse_frame_text(text: str, name=None) -> FrameFile:
    X = Y = None
    gal, r111, vals = [], [], []
    started = ended = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if ended:
            raise FrameError("content after 'end'", lineno)
        if not started:
            if line != "frame":
                raise FrameError("a frame file starts with 'frame'", lineno)
            started = True
            continue
        if head == "X" or head == "Y":
            if (X if head == "X" else Y) is not None:
                raise FrameError(f"{head} declared twice", lineno)
            if head == "X":
                X = (words[1:], lineno)
            else:
                Y = (words[1:], lineno)
        elif head == "G":
            if len(words) != 3:
                raise FrameError("G takes two points", lineno)
            gal.append((words[1], words[2], lineno))
        elif head == "R":
            if len(words) != 4:
                raise FrameError("R takes three points", lineno)
            r111.append((words[1], words[2], words[3], lineno))
        elif head == "val":
            if len(words) < 3 or words[2] != "=":
                raise FrameError("expected 'val <atom> = <points>'", lineno)
            vals.append((words[1], words[3:], lineno))
        elif line == "end":
            ended = True
        else:
            raise FrameError(f"unknown directive {head!r}", lineno)
    if not started:
        raise FrameError("empty frame file", 1)
    if not ended:
        raise FrameError("missing 'end'", len(text.splitlines()) or 1)
    if X is None or Y is None:
        raise FrameError("frame needs both X and Y lines", None)
    xs, ys = set(X[0]), set(Y[0])
    for a, b, ln in gal:
        if a not in xs:
            raise FrameError(f"unknown X point {a!r}", ln)
        if b not in ys:
            raise FrameError(f"unknown Y point {b!r}", ln)
    for *t, ln in r111:
        for p in t:
            if p not in xs:
                raise FrameError(f"unknown X point {p!r}", ln)
    try:
        frame = Frame(X[0], Y[0], [g[:2] for g in gal], [t[:3] for t in r111], name=name)
    except FrameError as exc:
        raise FrameError(str(exc), X[1]) from None
    out = FrameFile(frame)
    for atom, pts, ln in vals:
        m = re.fullmatch(r"([pPQ])(\d+)", atom)
        if not m:
            raise FrameError(f"bad atom name {atom!r}", ln)
        idx = int(m.group(2))
        try:
            if m.group(1) == "Q":
                target, mask = out.q_val, frame.mask_y(pts)
            else:
                target = out.sub_val if m.group(1) == "p" else out.p_val
                mask = frame.mask_x(pts)
        except FrameError as exc:
            raise FrameError(str(exc), ln) from None
        if idx in target:
            raise FrameError(f"{atom} valued twice", ln)
        target[idx] = mask
    return out


def load_frame(path) -> FrameFile:
    with open(path, encoding="utf-8") as fh:
        return parse_frame_text(fh.read(), name=str(path))


def frame_to_text(frame: Frame, sub_val=None, p_val=None, q_val=None, comment=None) -> str:
    """Serialize in the frame-file format (deterministic order)."""
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append("frame")
    lines.append("X " + " ".join(frame.X))
    lines.append("Y " + " ".join(frame.Y))
    xi, yi = frame._xi, frame._yi
    for a, b in sorted(frame.gal, key=lambda p: (xi[p[0]], yi[p[1]])):
        lines.append(f"G {a} {b}")
    for t in sorted(frame.r111, key=lambda t: tuple(xi[p] for p in t)):
        lines.append("R " + " ".join(t))
    for prefix, vals, names in (("p", sub_val, frame.names_x), ("P", p_val, frame.names_x), ("Q", q_val, frame.names_y)):
        for idx in sorted(vals or {}):
            pts = " ".join(names(vals[idx]))
            lines.append(f"val {prefix}{idx} = {pts}".rstrip())
    lines.append("end")
    return "\n".join(lines) + "\n"
