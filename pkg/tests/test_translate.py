import random

import pytest

from polarframes import Frame, ML2Model, algebra
from polarframes.fixtures import fixture
from polarframes.search import d_gals
from polarframes.semantics import eval_ml2, eval_sub
from polarframes.syntax import generate_formulas, parse_sub, print_formula
from polarframes.translate import (
    FaithfulnessBatch, IDENTITIES, bullet, circ, induce_sub_model, sequent_transfer,
    verify_faithfulness,
)


@pytest.mark.parametrize("src, out", [
    ("p0", "[d]<u>P0"),
    ("p0 | p1", "[d](<u>[d]<u>P0 | <u>[d]<u>P1)"),
    ("p0 * p1", "[d]<u>([d]<u>P0 * [d]<u>P1)"),
    ("p0 & p1", "[d]<u>P0 & [d]<u>P1"),
    ("p0 -> p1", "[d]<u>P0 -> [d]<u>P1"),
    ("p1 <- p0", "[d]<u>P1 <- [d]<u>P0"),
    ("top", "top@1"),
    ("bot", "bot@1"),
])
def test_bullet(src, out):
    assert print_formula(bullet(parse_sub(src))) == out


@pytest.mark.parametrize("src, out", [
    ("p0", "[u]~P0"),
    ("p0 | p1", "[u]~P0 & [u]~P1"),
    ("p0 -> p1", "[u]~([d]<u>P0 -> [d]<u>P1)"),
    ("p0 & p1", "[u](<d>[u]~P0 | <d>[u]~P1)"),
    ("p0 * p1", "[u]~([d]<u>P0 * [d]<u>P1)"),
    ("top", "bot@2"),
    ("bot", "top@2"),
])
def test_circ(src, out):
    assert print_formula(circ(parse_sub(src))) == out


def test_sorts():
    for f in generate_formulas(2, 2, per_depth=20):
        assert bullet(f).sort == 1 and circ(f).sort == 2


def test_induced_model(fneq, f1):
    assert induce_sub_model(ML2Model(fneq, {0: ["x0"]})).V == {0: 1}
    assert induce_sub_model(ML2Model(f1, {0: 0})).V == {0: f1.closure_x(0)}
    assert induce_sub_model(ML2Model(f1, {0: ["x1"]})).V == {0: f1.full_x}


def test_faithfulness_examples(fm3, f1r):
    rep = verify_faithfulness(ML2Model(fm3, {}), parse_sub("top"))
    assert rep.verdict and len(rep.identities) == 7
    m = ML2Model(fm3, {0: ["x1"], 1: ["x2"]})
    f = parse_sub("p0 | p1")
    assert eval_sub(induce_sub_model(m), f).extent == fm3.full_x == eval_ml2(m, bullet(f))
    assert verify_faithfulness(m, f).verdict
    m2 = ML2Model(f1r, {0: ["x0"], 1: ["x0"]})
    rep = verify_faithfulness(m2, parse_sub("p0 * p1"))
    assert rep.verdict
    assert eval_ml2(m2, bullet(parse_sub("p0 * p1"))) == f1r.mask_x(["x0"])


def test_report_lines(fm3):
    rep = verify_faithfulness(ML2Model(fm3, {0: ["x1"]}), parse_sub("p0"))
    lines = rep.lines()
    assert lines[0] == "formula: p0" and lines[-1] == "verdict: pass"
    assert [ln.split(":")[0] for ln in lines[1:-1]] == list(IDENTITIES)


def test_sequent_transfer_examples(fm3):
    m = ML2Model(fm3, {0: ["x1"], 1: ["x2"], 2: ["x3"]})
    p = parse_sub("p0")
    assert sequent_transfer(m, p, p) == (True, True, True)
    assert sequent_transfer(m, parse_sub("(p0 | p1) & p2"), parse_sub("p0 & p2 | p1 & p2")) == (False, False, False)
    fw = fixture("fw")
    assert sequent_transfer(ML2Model(fw, {0: ["x0"]}), parse_sub("p0 * p0"), p) == (False, False, False)


def test_failure_on_unstable_residual_frame():
    fr = Frame(["x0", "x1"], ["y0"], [], [("x0", "x0", "x0")])
    rep = verify_faithfulness(ML2Model(fr, {0: 3, 1: 0}), parse_sub("p0 -> p1"))
    bad = [i.name for i in rep.identities if not i.holds]
    assert bad == ["extent = [[[d]~circ]]", "extent = [[[d]<u>bullet]]"]
    assert all(i.witness == "x0" for i in rep.identities if not i.holds)


FORMULAS = generate_formulas(2, 3, per_depth=25)


def _frames_2x2():
    for rows in d_gals(2, 2):
        for code in range(256):
            rp = [(code >> (2 * i)) & 3 for i in range(4)]
            yield Frame.from_tables(2, 2, rows, rp)


def test_batch_matches_report():
    rng = random.Random(1)
    frames = list(_frames_2x2())
    batch = FaithfulnessBatch(FORMULAS)
    seen_fail = False
    for fr in rng.sample(frames, 60):
        iota = [rng.randrange(4), rng.randrange(4)]
        fails = batch.failures(fr.kernel, iota)
        m = ML2Model(fr, {0: iota[0], 1: iota[1]})
        for f, bad in zip(FORMULAS[::4], fails[::4]):
            rep = verify_faithfulness(m, f)
            assert [i.name for i in rep.identities if not i.holds] == bad
            seen_fail |= bool(bad)
    assert seen_fail


def test_faithful_wherever_residuals_stay_stable():
    """Exhaustive at 2x2: every failure sits on a frame where a residual of
    two stable sets is not stable, and involves an implication."""
    batch = FaithfulnessBatch(FORMULAS)
    bad_frames = 0
    for fr in _frames_2x2():
        stable_res = algebra.law_residuals_stable(fr).holds
        k = fr.kernel
        for a in range(4):
            for b in range(4):
                for f, bad in zip(FORMULAS, batch.failures(k, [a, b])):
                    if bad:
                        assert not stable_res
                        assert "->" in print_formula(f) or "<-" in print_formula(f)
                        bad_frames += 1
    assert bad_frames > 0
