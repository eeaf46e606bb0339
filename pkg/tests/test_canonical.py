from itertools import product

import pytest

from polarframes import algebra
from polarframes.canonical import (
    NAMED, LatticeError, canonical_frame, catalog, filters, ideals, is_filter, is_ideal,
    lattice_orders, lattice_to_text, named_lattice, parse_lattice_text, point_fuse, represent,
    residuated_fusions, validate_lattice, verify_embedding,
)

M3 = ["0", "a", "b", "c", "1"]
M3_LEQ = [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")]


def chain(n):
    return [str(i) for i in range(n)], [(str(i), str(i + 1)) for i in range(n - 1)]


def meet_table(elems, leq):
    L = validate_lattice(elems, leq, [[0] * len(elems)] * len(elems))
    return [[elems[L.meet[a][b]] for b in range(L.n)] for a in range(L.n)]


def test_boolean_chain():
    L = named_lattice("chain2_boolean")
    assert L.n == 2
    p = L.properties
    assert p["exchange"] and p["weakening"] and p["contraction"]


def test_m3_meet_is_not_residuated():
    with pytest.raises(LatticeError) as e:
        validate_lattice(M3, M3_LEQ, meet_table(M3, M3_LEQ))
    assert "residuation" in e.value.law and len(e.value.witness) == 3


def test_m3_zero_fusion():
    L = named_lattice("m3_zero")
    p = L.properties
    assert p["weakening"] and p["exchange"] and not p["contraction"]
    assert all(L.rimp[a][c] == L.top for a in range(5) for c in range(5))


@pytest.mark.parametrize("elems, leq, law", [
    (["0", "1"], [("0", "1"), ("1", "0")], "antisymmetry"),
    (["0", "a", "b"], [("0", "a"), ("0", "b")], "existence of a top element"),
    (["a", "b", "1"], [("a", "1"), ("b", "1")], "existence of a bottom element"),
    (["0", "1"], [("0", "z")], "known element"),
])
def test_validation_errors(elems, leq, law):
    with pytest.raises(LatticeError) as e:
        validate_lattice(elems, leq, [[0, 0], [0, 1]] if len(elems) == 2 else [[0] * 3] * 3)
    assert e.value.law == law


def test_missing_joins():
    elems = ["0", "a", "b", "c", "d", "1"]
    leq = [("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1")]
    with pytest.raises(LatticeError) as e:
        validate_lattice(elems, leq, [[0] * 6] * 6)
    assert e.value.law in ("existence of meets", "existence of joins")


def test_bottom_absorption():
    elems, leq = chain(2)
    with pytest.raises(LatticeError):
        validate_lattice(elems, leq, [[1, 1], [1, 1]])


def test_explicit_residual_tables_checked():
    elems, leq = chain(2)
    with pytest.raises(LatticeError) as e:
        validate_lattice(elems, leq, [[0, 0], [0, 1]], rimp=[[1, 1], [1, 1]])
    assert e.value.law == "residuation (right)"


def test_file_round_trip():
    for name in NAMED:
        L = named_lattice(name)
        back = parse_lattice_text(lattice_to_text(L))
        assert back.encoding() == L.encoding() and back.name == name


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("lattice\nelems 0 1\nleq 0 1\nfuse 0 0 = 0\n", 4),
    ("lattice\nelems 0 1\nleq 0 2\nend\n", 3),
    ("lattice\nelems 0 1\nwhat\nend\n", 3),
    ("lattice\nelems 0 1\nfuse 0 0 0\nend\n", 3),
    ("lattice\nend\nelems 0\n", 3),
])
def test_file_errors(text, line):
    with pytest.raises(LatticeError) as e:
        parse_lattice_text(text)
    assert e.value.line == line


def test_unknown_named():
    with pytest.raises(KeyError):
        named_lattice("nope")


# --- filters ---------------------------------------------------------------

def _oracle_filters(L, dual=False):
    out = []
    for m in range(1, 1 << L.n):
        S = [a for a in range(L.n) if m >> a & 1]
        closed = all(((not L.le(a, b)) if not dual else (not L.le(b, a))) or m >> b & 1
                     for a in S for b in range(L.n))
        op = L.join if dual else L.meet
        meet_ok = all(m >> op[a][b] & 1 for a in S for b in S)
        proper = not m >> (L.top if dual else L.bottom) & 1
        if closed and meet_ok and proper:
            out.append(m)
    return sorted(out)


def test_filters_examples():
    L2 = named_lattice("chain2_boolean")
    assert [L2.names(m) for m in filters(L2)] == [["1"]]
    assert [L2.names(m) for m in ideals(L2)] == [["0"]]
    L3 = named_lattice("chain3_godel")
    assert sorted(L3.names(m) for m in filters(L3)) == [["1"], ["m", "1"]]


def test_filters_against_all_subsets():
    lats = [named_lattice(n) for n in NAMED] + list(catalog(4))[::37]
    for L in lats:
        assert sorted(filters(L)) == _oracle_filters(L)
        assert sorted(ideals(L)) == _oracle_filters(L, dual=True)
        assert all(is_filter(L, m) for m in filters(L))
        assert all(is_ideal(L, m) for m in ideals(L))
        for a in range(L.n):
            if a != L.bottom:
                assert L.up[a] in filters(L)


def test_point_fuse():
    L = named_lattice("chain2_boolean")
    assert point_fuse(L, 0b10, 0b10) == (0b10, True)
    for name in NAMED:
        L = named_lattice(name)
        fs = filters(L)
        one = L.up[L.top]
        for z in fs:
            g, _ = point_fuse(L, z, one)
            prods = 0
            for a in range(L.n):
                if z >> a & 1:
                    prods |= 1 << L.fuse[a][L.top]
            # least filter containing the products: the up-set of their meet
            m = L.top
            for a in range(L.n):
                if prods >> a & 1:
                    m = L.meet[m][a]
            assert g == L.up[m]
        for a, b in product(range(L.n), repeat=2):
            if a != L.bottom and b != L.bottom:
                assert point_fuse(L, L.up[a], L.up[b])[0] == L.up[L.fuse[a][b]]


# --- canonical frame -------------------------------------------------------

def test_canonical_chain2():
    cf = canonical_frame(named_lattice("chain2_boolean"))
    fr = cf.frame
    assert len(fr.X) == 1 and len(fr.Y) == 1 and not fr.gal
    assert sorted(fr.stable_sets()) == [0, 1]


def test_canonical_chain3():
    L = named_lattice("chain3_godel")
    cf = canonical_frame(L)
    stable = sorted(cf.frame.stable_sets(), key=lambda m: bin(m).count("1"))
    assert len(stable) == 3
    for s, t in zip(stable, stable[1:]):
        assert s & ~t == 0
    m = represent(L, "m", cf)
    assert [cf.frame.X[i] for i in range(len(cf.frame.X)) if m >> i & 1] == ["f_m"]
    assert represent(L, "1", cf) == cf.frame.full_x and represent(L, "0", cf) == 0


def test_gal_is_nonempty_intersection():
    L = named_lattice("grid23_heyting")
    cf = canonical_frame(L)
    gal = set(cf.frame.gal)
    for (i, f), (j, d) in product(enumerate(cf.filters), enumerate(cf.ideals)):
        assert ((cf.frame.X[i], cf.frame.Y[j]) in gal) == bool(f & d)


def test_r111_definition():
    L = named_lattice("luk5")
    cf = canonical_frame(L)
    r = set(cf.frame.r111)
    X = cf.frame.X
    for (xi, x), (zi, z), (wi, w) in product(enumerate(cf.filters), repeat=3):
        g, proper = point_fuse(L, z, w)
        assert ((X[xi], X[zi], X[wi]) in r) == (proper and g & ~x == 0)


def test_representation_meets():
    for name in NAMED:
        L = named_lattice(name)
        cf = canonical_frame(L)
        for a, b in product(range(L.n), repeat=2):
            assert represent(L, L.meet[a][b], cf) == represent(L, a, cf) & represent(L, b, cf)


@pytest.mark.parametrize("name", NAMED)
def test_named_embeddings(name):
    rep = verify_embedding(named_lattice(name))
    assert rep.passed, rep.lines()
    assert rep.lines()[-1] == "verdict: pass"


def test_godel_chain_all_conditions():
    rep = verify_embedding(named_lattice("chain3_godel"))
    assert set(rep.info["classes"].split()) == {"NFL", "FL", "BCI", "BCW", "BCK"}


def test_m3_zero_not_c4():
    cf = canonical_frame(named_lattice("m3_zero"))
    assert not cf.frame.check_condition("C4").holds
    rep = verify_embedding(named_lattice("m3_zero"))
    assert rep.passed
    assert len(cf.frame.stable_sets()) == 5


def test_catalog_count_matches_brute_force():
    """Residuated fusions counted directly: every set {b : a*b <= c} and
    {a : a*b <= c} must be a non-empty principal down-set."""
    def count(n, le):
        def principal(S):
            tops = [s for s in S if all(le[t][s] for t in S)]
            return bool(tops) and all((b in S) == le[b][tops[0]] for b in range(n))
        rows = [r for r in product(range(n), repeat=n)
                if all(principal([b for b in range(n) if le[r[b]][c]]) for c in range(n))]
        return sum(
            all(principal([a for a in range(n) if le[t[a][b]][c]]) for b in range(n) for c in range(n))
            for t in product(rows, repeat=n))

    def chain_le(n):
        return [[a <= b for b in range(n)] for a in range(n)]
    square = [[True] * 4, [False, True, False, True], [False, False, True, True], [False] * 3 + [True]]
    expected = count(2, chain_le(2)) + count(3, chain_le(3)) + count(4, chain_le(4)) + count(4, square)
    assert expected == 1258
    assert len(list(catalog(4))) == expected


def test_lattice_orders():
    assert [len(lattice_orders(n)) for n in (1, 2, 3, 4, 5)] == [1, 1, 1, 2, 5]


def test_residuated_fusions_are_valid():
    ups = lattice_orders(3)[0]
    tables = residuated_fusions(ups)
    assert len(tables) == 20 and len(set(map(str, tables))) == 20


def test_catalog_embeddings_and_correspondence():
    assoc_mismatch = 0
    for L in catalog(4):
        rep = verify_embedding(L)
        assert rep.passed, rep.lines()
        if rep.info["C1"] != rep.info["associative"]:
            assoc_mismatch += 1
    assert assoc_mismatch == 0


def test_canonical_residuals_are_stable():
    for L in list(catalog(4))[::50]:
        fr = canonical_frame(L).frame
        assert algebra.law_residuals_stable(fr).holds


def test_too_small():
    L = validate_lattice(["0"], [], [[0]])
    with pytest.raises(LatticeError):
        canonical_frame(L)
