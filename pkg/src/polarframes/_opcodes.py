"""Instruction codes shared by the pure-Python and compiled kernels.

Set programs are flat integer sequences ``op, a, b`` (three ints per
instruction); instruction ``k`` writes slot ``k`` and may read any earlier
slot.  First-order programs are flat sequences ``op, a, b, c`` (four ints per
node) evaluated recursively from a root node.

The numeric values are mirrored in ``_ckernels.pyx``; ``tests/test_kernels.py``
checks the two stay in sync.
"""

# -- set programs ---------------------------------------------------------
LOADX = 0  # a = atom index into the sort-1 interpretation
LOADY = 1  # a = atom index into the sort-2 interpretation
TOPX = 2
BOTX = 3
TOPY = 4
BOTY = 5
NOTX = 6
NOTY = 7
AND = 8
OR = 9
BOXDOWN = 10  # Y-set -> X-set
DIAUP = 11  # X-set -> Y-set
BOXUP = 12  # X-set -> Y-set
DIADOWN = 13  # Y-set -> X-set
ODOT = 14
RRES = 15  # a = antecedent U, b = W
LRES = 16  # a = W, b = U
CLOSX = 17
CLOSY = 18
POLR = 19  # X-set -> Y-set
POLL = 20  # Y-set -> X-set
CONST = 21  # a = literal mask (non-negative, fits the kernel word)

SET_OPS = {
    name: value
    for name, value in globals().items()
    if name.isupper() and isinstance(value, int) and not name.startswith("F_")
}

# -- first-order programs -------------------------------------------------
F_P = 0  # a = predicate index, b = slot
F_Q = 1
F_I = 2  # a = x slot, b = y slot
F_R = 3  # a, b, c = slots
F_T1 = 4  # a = slot (reduced structures only)
F_T2 = 5
F_EQ = 6  # a, b = slots
F_NOT = 7  # a = node
F_AND = 8  # a, b = nodes
F_OR = 9
F_IMP = 10
F_EXISTS = 11  # a = slot, b = sort code, c = body node
F_FORALL = 12

SORT_X = 0
SORT_Y = 1
SORT_U = 2  # single sort of a reduced structure; Y point j is index nx + j
