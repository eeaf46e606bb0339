"""Pure-Python frame kernel.

Subsets are ints used as bitmasks over declaration order: bit ``i`` of an
X-set is the ``i``-th point of X.  This module is the fallback for, and the
behavioural reference of, the compiled ``_ckernels`` extension.
"""

from __future__ import annotations

from . import _opcodes as op

BACKEND = "python"


def _bits(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


class FrameKernel:
    """Precomputed bitmask tables of one finite frame.

    ``gal_rows[x]`` is the Y-mask ``{y | x gal y}``; ``rp[u * nx + v]`` is the
    X-mask ``{x | x R u v}``.
    """

    backend = BACKEND

    def __init__(self, nx, ny, gal_rows, rp):
        self.nx = nx
        self.ny = ny
        self.full_x = (1 << nx) - 1
        self.full_y = (1 << ny) - 1
        self.gal_rows = list(gal_rows)
        self.rp = list(rp)
        if len(self.gal_rows) != nx or len(self.rp) != nx * nx:
            raise ValueError("table sizes do not match the carrier sizes")
        self.gal_cols = [
            sum(1 << x for x in range(nx) if self.gal_rows[x] >> y & 1)
            for y in range(ny)
        ]
        self.i_rows = [self.full_y & ~r for r in self.gal_rows]
        self.i_cols = [self.full_x & ~c for c in self.gal_cols]

    # -- Galois connection and modalities ---------------------------------
    def polar_right(self, u):
        r = self.full_y
        for x in _bits(u):
            r &= self.gal_rows[x]
        return r

    def polar_left(self, v):
        r = self.full_x
        for y in _bits(v):
            r &= self.gal_cols[y]
        return r

    def closure_x(self, u):
        return self.polar_left(self.polar_right(u))

    def closure_y(self, v):
        return self.polar_right(self.polar_left(v))

    def diamond_up(self, u):
        r = 0
        for x in _bits(u):
            r |= self.i_rows[x]
        return r

    def box_down(self, v):
        r = 0
        for x in range(self.nx):
            if not self.i_rows[x] & ~v:
                r |= 1 << x
        return r

    def box_up(self, u):
        r = 0
        for y in range(self.ny):
            if not self.i_cols[y] & ~u:
                r |= 1 << y
        return r

    def diamond_down(self, v):
        r = 0
        for x in range(self.nx):
            if self.i_rows[x] & v:
                r |= 1 << x
        return r

    # -- ternary relation --------------------------------------------------
    def odot(self, u, w):
        n = self.nx
        r = 0
        for a in _bits(u):
            for b in _bits(w):
                r |= self.rp[a * n + b]
        return r

    def rres(self, u, w):
        n = self.nx
        r = 0
        for x in range(n):
            for z in _bits(u):
                if self.rp[z * n + x] & ~w:
                    break
            else:
                r |= 1 << x
        return r

    def lres(self, w, u):
        n = self.nx
        r = 0
        for x in range(n):
            for z in _bits(u):
                if self.rp[x * n + z] & ~w:
                    break
            else:
                r |= 1 << x
        return r

    def r_dual(self, z, z2):
        return self.polar_right(self.rp[z * self.nx + z2])

    # -- closure systems ---------------------------------------------------
    def stable_sets(self):
        found = {self.full_x}
        for col in self.gal_cols:
            found |= {s & col for s in found}
        return sorted(found, key=lambda m: (bin(m).count("1"), m))

    def costable_sets(self):
        found = {self.full_y}
        for row in self.gal_rows:
            found |= {s & row for s in found}
        return sorted(found, key=lambda m: (bin(m).count("1"), m))

    # -- relational constraints (literal quantifier checks) ----------------
    def check_c1(self):
        n, rp = self.nx, self.rp
        for w in range(n):
            for z in range(n):
                for u in range(n):
                    for v in range(n):
                        first = any(
                            rp[u * n + v] >> x & 1 and rp[x * n + w] >> z & 1
                            for x in range(n)
                        )
                        second = any(
                            rp[v * n + w] >> x & 1 and rp[u * n + x] >> z & 1
                            for x in range(n)
                        )
                        if first != second:
                            return (w, z, u, v)
        return None

    def check_c2(self):
        n, rp = self.nx, self.rp
        for x in range(n):
            for z in range(n):
                for z2 in range(n):
                    if (rp[z * n + z2] >> x & 1) != (rp[z2 * n + z] >> x & 1):
                        return (x, z, z2)
        return None

    def check_c3(self):
        n, rp, g = self.nx, self.rp, self.gal_rows
        for x in range(n):
            for z in range(n):
                for z2 in range(n):
                    if rp[z * n + z2] >> x & 1 and g[z2] & ~g[x]:
                        return (x, z, z2)
        return None

    def check_c3_boolean(self):
        n, rp = self.nx, self.rp
        for x in range(n):
            for z in range(n):
                for z2 in range(n):
                    if rp[z * n + z2] >> x & 1 and z2 != x:
                        return (x, z, z2)
        return None

    def check_c4(self):
        n, rp = self.nx, self.rp
        for x in range(n):
            if not rp[x * n + x] >> x & 1:
                return (x,)
        return None

    # -- set programs ------------------------------------------------------
    def run(self, program, atoms_x, atoms_y):
        """Evaluate a set program; returns the list of slot values."""
        fx, fy = self.full_x, self.full_y
        out = []
        push = out.append
        for k in range(0, len(program), 3):
            code, a, b = program[k], program[k + 1], program[k + 2]
            if code == op.AND:
                r = out[a] & out[b]
            elif code == op.OR:
                r = out[a] | out[b]
            elif code == op.LOADX:
                r = atoms_x[a]
            elif code == op.LOADY:
                r = atoms_y[a]
            elif code == op.NOTX:
                r = fx & ~out[a]
            elif code == op.NOTY:
                r = fy & ~out[a]
            elif code == op.BOXDOWN:
                r = self.box_down(out[a])
            elif code == op.DIAUP:
                r = self.diamond_up(out[a])
            elif code == op.BOXUP:
                r = self.box_up(out[a])
            elif code == op.DIADOWN:
                r = self.diamond_down(out[a])
            elif code == op.ODOT:
                r = self.odot(out[a], out[b])
            elif code == op.RRES:
                r = self.rres(out[a], out[b])
            elif code == op.LRES:
                r = self.lres(out[a], out[b])
            elif code == op.CLOSX:
                r = self.closure_x(out[a])
            elif code == op.CLOSY:
                r = self.closure_y(out[a])
            elif code == op.POLR:
                r = self.polar_right(out[a])
            elif code == op.POLL:
                r = self.polar_left(out[a])
            elif code == op.TOPX:
                r = fx
            elif code == op.TOPY:
                r = fy
            elif code in (op.BOTX, op.BOTY):
                r = 0
            elif code == op.CONST:
                r = a
            else:
                raise ValueError(f"unknown set opcode {code}")
            push(r)
        return out

    # -- first-order programs ----------------------------------------------
    def fol_mask(self, nodes, root, slot, sort, nslots, atoms_x, atoms_y, reduced):
        """Mask of carrier points at which node ``root`` holds, with the free
        variable in ``slot`` ranging over ``sort``."""
        return self.fol_masks(nodes, [root], slot, sort, nslots, atoms_x, atoms_y, reduced)[0]

    def fol_masks(self, nodes, roots, slot, sort, nslots, atoms_x, atoms_y, reduced):
        """``fol_mask`` for several roots sharing one node table."""
        env = [0] * nslots
        nx = self.nx
        i_rows, rp = self.i_rows, self.rp

        def size(s):
            if s == op.SORT_X:
                return nx
            if s == op.SORT_Y:
                return self.ny
            return nx + self.ny

        def ev(k):
            base = 4 * k
            code, a, b, c = nodes[base], nodes[base + 1], nodes[base + 2], nodes[base + 3]
            if code == op.F_AND:
                return ev(a) and ev(b)
            if code == op.F_OR:
                return ev(a) or ev(b)
            if code == op.F_IMP:
                return (not ev(a)) or ev(b)
            if code == op.F_NOT:
                return not ev(a)
            if code == op.F_EXISTS or code == op.F_FORALL:
                fs = qfree.get(k)
                if fs is not None:
                    key = (k, *(env[i] for i in fs))
                    if key in memo:
                        return memo[key]
                want = code == op.F_EXISTS
                saved = env[a]
                hit = not want
                for val in range(size(b)):
                    env[a] = val
                    if ev(c) == want:
                        hit = want
                        break
                env[a] = saved
                if fs is not None:
                    memo[key] = hit
                return hit
            if reduced:
                if code == op.F_P:
                    u = env[b]
                    return u < nx and bool(atoms_x[a] >> u & 1)
                if code == op.F_Q:
                    u = env[b]
                    return u >= nx and bool(atoms_y[a] >> (u - nx) & 1)
                if code == op.F_I:
                    u, v = env[a], env[b]
                    return u < nx and v >= nx and bool(i_rows[u] >> (v - nx) & 1)
                if code == op.F_R:
                    u, v, w = env[a], env[b], env[c]
                    return u < nx and v < nx and w < nx and bool(rp[v * nx + w] >> u & 1)
                if code == op.F_T1:
                    return env[a] < nx
                if code == op.F_T2:
                    return env[a] >= nx
            else:
                if code == op.F_P:
                    return bool(atoms_x[a] >> env[b] & 1)
                if code == op.F_Q:
                    return bool(atoms_y[a] >> env[b] & 1)
                if code == op.F_I:
                    return bool(i_rows[env[a]] >> env[b] & 1)
                if code == op.F_R:
                    return bool(rp[env[b] * nx + env[c]] >> env[a] & 1)
                if code == op.F_T1 or code == op.F_T2:
                    raise ValueError("T1/T2 only occur in reduced structures")
            if code == op.F_EQ:
                return env[a] == env[b]
            raise ValueError(f"unknown first-order opcode {code}")

        qfree, memo = _quantifier_free_slots(nodes), {}
        res = []
        for root in roots:
            out = 0
            for val in range(size(sort)):
                env[slot] = val
                if ev(root):
                    out |= 1 << val
            res.append(out)
        return res


def _quantifier_free_slots(nodes):
    """Free slots of each quantifier node, for memoizing its value; empty
    when some child does not precede its parent."""
    fv, out = [], {}
    for k in range(len(nodes) // 4):
        code, a, b, c = nodes[4 * k: 4 * k + 4]
        if code in (op.F_P, op.F_Q):
            m = {b}
        elif code in (op.F_I, op.F_EQ):
            m = {a, b}
        elif code == op.F_R:
            m = {a, b, c}
        elif code in (op.F_T1, op.F_T2):
            m = {a}
        elif code == op.F_NOT:
            if a >= k:
                return {}
            m = fv[a]
        elif code in (op.F_AND, op.F_OR, op.F_IMP):
            if a >= k or b >= k:
                return {}
            m = fv[a] | fv[b]
        elif code in (op.F_EXISTS, op.F_FORALL):
            if c >= k:
                return {}
            m = fv[c] - {a}
            out[k] = tuple(sorted(m))
        else:
            m = set()
        fv.append(m)
    return out
