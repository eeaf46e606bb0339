# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled frame kernel (uint64 bitmasks, at most 64 points per sort).

Same interface and results as ``_pykernels.FrameKernel``.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

BACKEND = "cython"
MAX_POINTS = 64

# mirrored from _opcodes
cdef enum:
    LOADX = 0
    LOADY = 1
    TOPX = 2
    BOTX = 3
    TOPY = 4
    BOTY = 5
    NOTX = 6
    NOTY = 7
    AND = 8
    OR = 9
    BOXDOWN = 10
    DIAUP = 11
    BOXUP = 12
    DIADOWN = 13
    ODOT = 14
    RRES = 15
    LRES = 16
    CLOSX = 17
    CLOSY = 18
    POLR = 19
    POLL = 20
    CONST = 21

cdef enum:
    F_P = 0
    F_Q = 1
    F_I = 2
    F_R = 3
    F_T1 = 4
    F_T2 = 5
    F_EQ = 6
    F_NOT = 7
    F_AND = 8
    F_OR = 9
    F_IMP = 10
    F_EXISTS = 11
    F_FORALL = 12

cdef enum:
    SORT_X = 0
    SORT_Y = 1

SET_OPS = {
    "LOADX": LOADX, "LOADY": LOADY, "TOPX": TOPX, "BOTX": BOTX, "TOPY": TOPY,
    "BOTY": BOTY, "NOTX": NOTX, "NOTY": NOTY, "AND": AND, "OR": OR,
    "BOXDOWN": BOXDOWN, "DIAUP": DIAUP, "BOXUP": BOXUP, "DIADOWN": DIADOWN,
    "ODOT": ODOT, "RRES": RRES, "LRES": LRES, "CLOSX": CLOSX, "CLOSY": CLOSY,
    "POLR": POLR, "POLL": POLL, "CONST": CONST,
}
FOL_OPS = {
    "F_P": F_P, "F_Q": F_Q, "F_I": F_I, "F_R": F_R, "F_T1": F_T1, "F_T2": F_T2,
    "F_EQ": F_EQ, "F_NOT": F_NOT, "F_AND": F_AND, "F_OR": F_OR, "F_IMP": F_IMP,
    "F_EXISTS": F_EXISTS, "F_FORALL": F_FORALL,
}


cdef struct FolCtx:
    int *nodes
    long *env
    int nx
    int ny
    bint reduced
    uint64_t *atoms_x
    uint64_t *atoms_y
    # memo for quantifier nodes with at most three free slots
    int *qk
    int *qs
    long *qbase
    signed char *memo
    long width


cdef class FrameKernel:
    cdef public int nx, ny
    cdef uint64_t fx, fy
    cdef uint64_t grow[64]
    cdef uint64_t gcol[64]
    cdef uint64_t irow[64]
    cdef uint64_t icol[64]
    cdef uint64_t *rpt
    cdef readonly str backend

    def __cinit__(self, int nx, int ny, gal_rows, rp):
        self.rpt = NULL
        if nx > MAX_POINTS or ny > MAX_POINTS:
            raise ValueError("compiled kernel handles at most 64 points per sort")
        if len(gal_rows) != nx or len(rp) != nx * nx:
            raise ValueError("table sizes do not match the carrier sizes")
        self.nx = nx
        self.ny = ny
        self.backend = BACKEND
        self.fx = (<uint64_t>1 << nx) - 1 if nx < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
        self.fy = (<uint64_t>1 << ny) - 1 if ny < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
        cdef int x, y
        for x in range(nx):
            self.grow[x] = <uint64_t>gal_rows[x]
            self.irow[x] = self.fy & ~self.grow[x]
        for y in range(ny):
            self.gcol[y] = 0
            for x in range(nx):
                if (self.grow[x] >> y) & 1:
                    self.gcol[y] |= <uint64_t>1 << x
            self.icol[y] = self.fx & ~self.gcol[y]
        self.rpt = <uint64_t *>malloc(max(1, nx * nx) * sizeof(uint64_t))
        if self.rpt == NULL:
            raise MemoryError()
        for x in range(nx * nx):
            self.rpt[x] = <uint64_t>rp[x]

    def __dealloc__(self):
        if self.rpt != NULL:
            free(self.rpt)

    property full_x:
        def __get__(self):
            return self.fx

    property full_y:
        def __get__(self):
            return self.fy

    property gal_rows:
        def __get__(self):
            return [self.grow[x] for x in range(self.nx)]

    property gal_cols:
        def __get__(self):
            return [self.gcol[y] for y in range(self.ny)]

    property i_rows:
        def __get__(self):
            return [self.irow[x] for x in range(self.nx)]

    property i_cols:
        def __get__(self):
            return [self.icol[y] for y in range(self.ny)]

    property rp:
        def __get__(self):
            return [self.rpt[k] for k in range(self.nx * self.nx)]

    # -- C-level primitives
    cdef uint64_t _polr(self, uint64_t u) nogil:
        cdef uint64_t r = self.fy
        cdef int x = 0
        while u:
            if u & 1:
                r &= self.grow[x]
            u >>= 1
            x += 1
        return r

    cdef uint64_t _poll(self, uint64_t v) nogil:
        cdef uint64_t r = self.fx
        cdef int y = 0
        while v:
            if v & 1:
                r &= self.gcol[y]
            v >>= 1
            y += 1
        return r

    cdef uint64_t _diaup(self, uint64_t u) nogil:
        cdef uint64_t r = 0
        cdef int x = 0
        while u:
            if u & 1:
                r |= self.irow[x]
            u >>= 1
            x += 1
        return r

    cdef uint64_t _boxdown(self, uint64_t v) nogil:
        cdef uint64_t r = 0
        cdef int x
        for x in range(self.nx):
            if not (self.irow[x] & ~v):
                r |= <uint64_t>1 << x
        return r

    cdef uint64_t _boxup(self, uint64_t u) nogil:
        cdef uint64_t r = 0
        cdef int y
        for y in range(self.ny):
            if not (self.icol[y] & ~u):
                r |= <uint64_t>1 << y
        return r

    cdef uint64_t _diadown(self, uint64_t v) nogil:
        cdef uint64_t r = 0
        cdef int x
        for x in range(self.nx):
            if self.irow[x] & v:
                r |= <uint64_t>1 << x
        return r

    cdef uint64_t _odot(self, uint64_t u, uint64_t w) nogil:
        cdef uint64_t r = 0
        cdef int a, b, n = self.nx
        for a in range(n):
            if (u >> a) & 1:
                for b in range(n):
                    if (w >> b) & 1:
                        r |= self.rpt[a * n + b]
        return r

    cdef uint64_t _rres(self, uint64_t u, uint64_t w) nogil:
        cdef uint64_t r = 0
        cdef int x, z, n = self.nx
        cdef bint ok
        for x in range(n):
            ok = True
            for z in range(n):
                if (u >> z) & 1 and (self.rpt[z * n + x] & ~w):
                    ok = False
                    break
            if ok:
                r |= <uint64_t>1 << x
        return r

    cdef uint64_t _lres(self, uint64_t w, uint64_t u) nogil:
        cdef uint64_t r = 0
        cdef int x, z, n = self.nx
        cdef bint ok
        for x in range(n):
            ok = True
            for z in range(n):
                if (u >> z) & 1 and (self.rpt[x * n + z] & ~w):
                    ok = False
                    break
            if ok:
                r |= <uint64_t>1 << x
        return r

    # -- Python-visible operators
    def polar_right(self, u):
        return self._polr(<uint64_t>u)

    def polar_left(self, v):
        return self._poll(<uint64_t>v)

    def closure_x(self, u):
        return self._poll(self._polr(<uint64_t>u))

    def closure_y(self, v):
        return self._polr(self._poll(<uint64_t>v))

    def diamond_up(self, u):
        return self._diaup(<uint64_t>u)

    def box_down(self, v):
        return self._boxdown(<uint64_t>v)

    def box_up(self, u):
        return self._boxup(<uint64_t>u)

    def diamond_down(self, v):
        return self._diadown(<uint64_t>v)

    def odot(self, u, w):
        return self._odot(<uint64_t>u, <uint64_t>w)

    def rres(self, u, w):
        return self._rres(<uint64_t>u, <uint64_t>w)

    def lres(self, w, u):
        return self._lres(<uint64_t>w, <uint64_t>u)

    def r_dual(self, int z, int z2):
        return self._polr(self.rpt[z * self.nx + z2])

    def stable_sets(self):
        found = {self.fx}
        for y in range(self.ny):
            col = self.gcol[y]
            found |= {s & col for s in found}
        return sorted(found, key=lambda m: (bin(m).count("1"), m))

    def costable_sets(self):
        found = {self.fy}
        for x in range(self.nx):
            row = self.grow[x]
            found |= {s & row for s in found}
        return sorted(found, key=lambda m: (bin(m).count("1"), m))

    def check_c1(self):
        cdef int n = self.nx, w, z, u, v, x
        cdef bint first, second
        for w in range(n):
            for z in range(n):
                for u in range(n):
                    for v in range(n):
                        first = False
                        for x in range(n):
                            if (self.rpt[u * n + v] >> x) & 1 and (self.rpt[x * n + w] >> z) & 1:
                                first = True
                                break
                        second = False
                        for x in range(n):
                            if (self.rpt[v * n + w] >> x) & 1 and (self.rpt[u * n + x] >> z) & 1:
                                second = True
                                break
                        if first != second:
                            return (w, z, u, v)
        return None

    def check_c2(self):
        cdef int n = self.nx, x, z, z2
        for x in range(n):
            for z in range(n):
                for z2 in range(n):
                    if ((self.rpt[z * n + z2] >> x) & 1) != ((self.rpt[z2 * n + z] >> x) & 1):
                        return (x, z, z2)
        return None

    def check_c3(self):
        cdef int n = self.nx, x, z, z2
        for x in range(n):
            for z in range(n):
                for z2 in range(n):
                    if (self.rpt[z * n + z2] >> x) & 1 and (self.grow[z2] & ~self.grow[x]):
                        return (x, z, z2)
        return None

    def check_c3_boolean(self):
        cdef int n = self.nx, x, z, z2
        for x in range(n):
            for z in range(n):
                for z2 in range(n):
                    if (self.rpt[z * n + z2] >> x) & 1 and z2 != x:
                        return (x, z, z2)
        return None

    def check_c4(self):
        cdef int n = self.nx, x
        for x in range(n):
            if not (self.rpt[x * n + x] >> x) & 1:
                return (x,)
        return None

    def run(self, program, atoms_x, atoms_y):
        """Evaluate a set program; returns the list of slot values."""
        cdef Py_ssize_t plen = len(program)
        cdef Py_ssize_t nins = plen // 3
        cdef Py_ssize_t k
        cdef int code
        cdef long a, b
        cdef uint64_t r
        cdef uint64_t *out = <uint64_t *>malloc(max(1, nins) * sizeof(uint64_t))
        if out == NULL:
            raise MemoryError()
        try:
            for k in range(nins):
                code = program[3 * k]
                a = program[3 * k + 1]
                b = program[3 * k + 2]
                if code == AND:
                    r = out[a] & out[b]
                elif code == OR:
                    r = out[a] | out[b]
                elif code == LOADX:
                    r = <uint64_t>atoms_x[a]
                elif code == LOADY:
                    r = <uint64_t>atoms_y[a]
                elif code == NOTX:
                    r = self.fx & ~out[a]
                elif code == NOTY:
                    r = self.fy & ~out[a]
                elif code == BOXDOWN:
                    r = self._boxdown(out[a])
                elif code == DIAUP:
                    r = self._diaup(out[a])
                elif code == BOXUP:
                    r = self._boxup(out[a])
                elif code == DIADOWN:
                    r = self._diadown(out[a])
                elif code == ODOT:
                    r = self._odot(out[a], out[b])
                elif code == RRES:
                    r = self._rres(out[a], out[b])
                elif code == LRES:
                    r = self._lres(out[a], out[b])
                elif code == CLOSX:
                    r = self._poll(self._polr(out[a]))
                elif code == CLOSY:
                    r = self._polr(self._poll(out[a]))
                elif code == POLR:
                    r = self._polr(out[a])
                elif code == POLL:
                    r = self._poll(out[a])
                elif code == TOPX:
                    r = self.fx
                elif code == TOPY:
                    r = self.fy
                elif code == BOTX or code == BOTY:
                    r = 0
                elif code == CONST:
                    r = <uint64_t>a
                else:
                    raise ValueError(f"unknown set opcode {code}")
                out[k] = r
            return [out[k] for k in range(nins)]
        finally:
            free(out)

    cdef int _size(self, int s) nogil:
        if s == SORT_X:
            return self.nx
        if s == SORT_Y:
            return self.ny
        return self.nx + self.ny

    cdef int _quant(self, FolCtx *c, int code, int a, int b, int cc) nogil:
        cdef int want = 1 if code == F_EXISTS else 0
        cdef long saved = c.env[a]
        cdef int val, r, n = self._size(b)
        for val in range(n):
            c.env[a] = val
            r = self._ev(c, cc)
            if r < 0:
                c.env[a] = saved
                return r
            if r == want:
                c.env[a] = saved
                return want
        c.env[a] = saved
        return 1 - want

    cdef int _ev(self, FolCtx *c, int k) nogil:
        # returns 0/1, or -1 for a malformed program
        cdef int *nd = c.nodes + 4 * k
        cdef int code = nd[0], a = nd[1], b = nd[2], cc = nd[3]
        cdef int r, val, nx = c.nx
        cdef long u, v, w, key
        if code == F_AND:
            r = self._ev(c, a)
            if r != 1:
                return r
            return self._ev(c, b)
        if code == F_OR:
            r = self._ev(c, a)
            if r != 0:
                return r
            return self._ev(c, b)
        if code == F_IMP:
            r = self._ev(c, a)
            if r < 0:
                return r
            if r == 0:
                return 1
            return self._ev(c, b)
        if code == F_NOT:
            r = self._ev(c, a)
            if r < 0:
                return r
            return 1 - r
        if code == F_EXISTS or code == F_FORALL:
            key = -1
            if c.qk[k] >= 0:
                key = c.qbase[k]
                u = 1
                for val in range(c.qk[k]):
                    key += c.env[c.qs[3 * k + val]] * u
                    u *= c.width
                if c.memo[key] >= 0:
                    return c.memo[key]
            r = self._quant(c, code, a, b, cc)
            if key >= 0 and r >= 0:
                c.memo[key] = r
            return r
        if code == F_EQ:
            return 1 if c.env[a] == c.env[b] else 0
        if c.reduced:
            if code == F_P:
                u = c.env[b]
                return 1 if u < nx and (c.atoms_x[a] >> u) & 1 else 0
            if code == F_Q:
                u = c.env[b]
                return 1 if u >= nx and (c.atoms_y[a] >> (u - nx)) & 1 else 0
            if code == F_I:
                u = c.env[a]
                v = c.env[b]
                return 1 if u < nx and v >= nx and (self.irow[u] >> (v - nx)) & 1 else 0
            if code == F_R:
                u = c.env[a]
                v = c.env[b]
                w = c.env[cc]
                return 1 if u < nx and v < nx and w < nx and (self.rpt[v * nx + w] >> u) & 1 else 0
            if code == F_T1:
                return 1 if c.env[a] < nx else 0
            if code == F_T2:
                return 1 if c.env[a] >= nx else 0
        else:
            if code == F_P:
                return (c.atoms_x[a] >> c.env[b]) & 1
            if code == F_Q:
                return (c.atoms_y[a] >> c.env[b]) & 1
            if code == F_I:
                return (self.irow[c.env[a]] >> c.env[b]) & 1
            if code == F_R:
                return (self.rpt[c.env[b] * nx + c.env[cc]] >> c.env[a]) & 1
        return -1

    def fol_mask(self, nodes, int root, int slot, int sort, int nslots,
                 atoms_x, atoms_y, bint reduced):
        """Mask of carrier points at which node ``root`` holds, with the free
        variable in ``slot`` ranging over ``sort``."""
        return self.fol_masks(nodes, [root], slot, sort, nslots, atoms_x, atoms_y, reduced)[0]

    def fol_masks(self, nodes, roots, int slot, int sort, int nslots,
                  atoms_x, atoms_y, bint reduced):
        """``fol_mask`` for several roots sharing one node table."""
        cdef FolCtx c
        cdef Py_ssize_t i, nn = len(nodes)
        cdef int val, r, n, root
        cdef uint64_t out
        cdef int nk = <int>(nn // 4)
        cdef const int[::1] nv
        if reduced and self.nx + self.ny > 64:
            raise ValueError("reduced carrier exceeds 64 points")
        c.nodes = <int *>malloc(max(1, nn) * sizeof(int))
        c.env = <long *>malloc(max(1, nslots) * sizeof(long))
        c.atoms_x = <uint64_t *>malloc(max(1, len(atoms_x)) * sizeof(uint64_t))
        c.atoms_y = <uint64_t *>malloc(max(1, len(atoms_y)) * sizeof(uint64_t))
        c.qk = <int *>malloc(max(1, nk) * sizeof(int))
        c.qs = <int *>malloc(max(1, 3 * nk) * sizeof(int))
        c.qbase = <long *>malloc(max(1, nk) * sizeof(long))
        c.memo = NULL
        res = []
        try:
            if (c.nodes == NULL or c.env == NULL or c.atoms_x == NULL or c.atoms_y == NULL
                    or c.qk == NULL or c.qs == NULL or c.qbase == NULL):
                raise MemoryError()
            try:
                nv = nodes
                for i in range(nn):
                    c.nodes[i] = nv[i]
            except (TypeError, ValueError):
                for i in range(nn):
                    c.nodes[i] = nodes[i]
            for i in range(nslots):
                c.env[i] = 0
            for i in range(len(atoms_x)):
                c.atoms_x[i] = <uint64_t>atoms_x[i]
            for i in range(len(atoms_y)):
                c.atoms_y[i] = <uint64_t>atoms_y[i]
            c.nx = self.nx
            c.ny = self.ny
            c.reduced = reduced
            c.width = self.nx + self.ny if reduced else max(self.nx, self.ny)
            c.memo = <signed char *>malloc(max(1, _memo_layout(c.nodes, nk, nslots, c.width, c.qk, c.qs, c.qbase)))
            if c.memo == NULL:
                raise MemoryError()
            for i in range(_memo_size(c.qk, c.qbase, nk, c.width)):
                c.memo[i] = -1
            n = self._size(sort)
            for root in roots:
                out = 0
                for val in range(n):
                    c.env[slot] = val
                    r = self._ev(&c, root)
                    if r < 0:
                        raise ValueError("malformed first-order program")
                    if r:
                        out |= <uint64_t>1 << val
                res.append(out)
            return res
        finally:
            free(c.nodes)
            free(c.env)
            free(c.atoms_x)
            free(c.atoms_y)
            free(c.qk)
            free(c.qs)
            free(c.qbase)
            free(c.memo)


cdef long _memo_layout(int *nodes, int nk, int nslots, long width, int *qk, int *qs, long *qbase):
    """Fill the per-node memo tables; returns the memo size in bytes.

    Each quantifier node whose free slots number at most three gets a block
    of ``width**k`` entries.  A table whose children do not precede their
    parents (or with more than 64 slots) gets no memo at all.
    """
    cdef uint64_t *fv = <uint64_t *>malloc(max(1, nk) * sizeof(uint64_t))
    cdef int k, code, a, b, cc, cnt, s
    cdef uint64_t m
    cdef long total = 0, blk
    cdef bint ok = nslots <= 64
    if fv == NULL:
        raise MemoryError()
    for k in range(nk):
        qk[k] = -1
        qbase[k] = 0
    k = 0
    while ok and k < nk:
        code = nodes[4 * k]
        a = nodes[4 * k + 1]
        b = nodes[4 * k + 2]
        cc = nodes[4 * k + 3]
        if code == F_P or code == F_Q:
            m = <uint64_t>1 << b
        elif code == F_I or code == F_EQ:
            m = (<uint64_t>1 << a) | (<uint64_t>1 << b)
        elif code == F_R:
            m = (<uint64_t>1 << a) | (<uint64_t>1 << b) | (<uint64_t>1 << cc)
        elif code == F_T1 or code == F_T2:
            m = <uint64_t>1 << a
        elif code == F_NOT:
            ok = a < k
            m = fv[a] if ok else 0
        elif code == F_AND or code == F_OR or code == F_IMP:
            ok = a < k and b < k
            m = (fv[a] | fv[b]) if ok else 0
        elif code == F_EXISTS or code == F_FORALL:
            ok = cc < k
            m = (fv[cc] & ~(<uint64_t>1 << a)) if ok else 0
            cnt = 0
            for s in range(nslots):
                if m >> s & 1:
                    if cnt < 3:
                        qs[3 * k + cnt] = s
                    cnt += 1
            if ok and cnt <= 3:
                blk = 1
                for s in range(cnt):
                    blk *= width
                qk[k] = cnt
                qbase[k] = total
                total += blk
        else:
            m = 0
        fv[k] = m
        k += 1
    free(fv)
    if not ok:
        for k in range(nk):
            qk[k] = -1
        return 0
    return total


cdef long _memo_size(int *qk, long *qbase, int nk, long width):
    cdef long total = 0, blk
    cdef int k, s
    for k in range(nk):
        if qk[k] >= 0:
            blk = 1
            for s in range(qk[k]):
                blk *= width
            if qbase[k] + blk > total:
                total = qbase[k] + blk
    return total
