import json

import pytest
from hypothesis import given, settings, strategies as st

from totaljohnson.cylinder import (
    CertificateError,
    CylinderPresentation,
    TwistWord,
    action,
    compose,
    v_iteration,
    v_solve,
    zeta,
    zeta_tilde,
)
from totaljohnson.goldman import DegreeError, GoldmanElement, PathElement, bch, push_forward
from totaljohnson.magnus import TruncationContext
from totaljohnson.surface import StdEmbedding, standard_surface
from totaljohnson.uh import kappa_exp_check

from strategies import filtered_elements

S = standard_surface(1)
EMB = StdEmbedding.standard(S, 1)
T = EMB.sigma_tilde


def twist(items, surface=T):
    return TwistWord.from_json(surface, items)


def test_single_factor_must_be_null_homologous():
    with pytest.raises(CertificateError):
        twist([{"curve": "a"}])


def test_exponent_must_be_unit():
    with pytest.raises(CertificateError):
        twist([{"curve": "a b a' b'", "exp": 2}])


def test_bp_partners_need_equal_homology():
    with pytest.raises(CertificateError):
        twist([{"curve": "a", "partner": "b", "kind": "bp"}])


def test_labeled_link():
    c = T.parse_cyclic("a b a' b'")
    assert TwistWord.from_labeled_link(T, [(c, 1)]).factors[0].exp == -1
    pair = TwistWord.from_labeled_link(T, [(T.parse_cyclic("a"), -1), (T.parse_cyclic("a b_b' a_b b_b a_b'"), 1)])
    f = pair.factors[0]
    assert (f.kind, f.exp) == ("bp", 1)
    with pytest.raises(CertificateError):
        TwistWord.from_labeled_link(T, [(c, 2)])
    with pytest.raises(CertificateError):
        TwistWord.from_labeled_link(T, [(T.parse_cyclic("a"), 1), (T.parse_cyclic("a"), 1)])


def test_json_roundtrip_and_inverse():
    w = twist([{"curve": "a b a' b'", "exp": -1}, {"curve": "a", "partner": "a b_b' a_b b_b a_b'", "kind": "bp"}])
    assert TwistWord.from_json(T, w.to_json()).to_json() == w.to_json()
    inv = w.inverse()
    assert [f.exp for f in inv.factors] == [-1, 1]
    assert len((w * inv).factors) == 4


def test_empty_word_gives_zero(fixtures_dir):
    c = CylinderPresentation.load(fixtures_dir / "twists" / "empty.json")
    assert zeta(c.twist, c.ctx).is_zero()
    assert zeta_tilde(c).is_zero()


def test_inverse_twist_negates_zeta_tilde(fixtures_dir):
    c = CylinderPresentation.load(fixtures_dir / "twists" / "knot_straddle.json", 6)
    d = CylinderPresentation.load(fixtures_dir / "twists" / "knot_straddle_inverse.json", 6)
    assert zeta_tilde(c) == zeta_tilde(d).scale(-1)
    assert compose(c, d, 6).is_zero()


def test_inline_embedding(fixtures_dir):
    data = {"embedding": {"kind": "standard", "surface": str(fixtures_dir / "surfaces" / "s11.json")}, "factors": []}
    c = CylinderPresentation.from_json(data)
    assert c.ctx.N == 6 and c.embedding.sigma_tilde == T


@settings(max_examples=30)
@given(st.data())
def test_v_iteration_on_random_elements(data):
    x = data.draw(filtered_elements(T, N=6))
    rec = v_iteration(x, EMB)
    for n, inc in enumerate(rec.increments, start=1):
        assert inc.degree() >= 2 + n
    assert rec.residual.is_zero()
    # the solution satisfies the defining equation directly
    iv = push_forward(EMB.iota1, rec.v, T, x.ctx)
    assert push_forward(EMB.kappa, bch(iv.scale(-1), x), EMB.sigma_st).is_zero()
    assert v_solve(x, EMB) == rec.v


@settings(max_examples=6)
@given(st.data())
def test_v_solution_exponentiates_under_kappa(data):
    x = data.draw(filtered_elements(T, N=7, max_terms=2))
    assert kappa_exp_check(x, v_solve(x, EMB), EMB)


def test_v_iteration_rejects_low_degree():
    with pytest.raises(DegreeError):
        v_iteration(GoldmanElement.parse(T, "|a b|", TruncationContext(6, T.alphabet)), EMB)


def test_action_of_empty_word_is_identity(fixtures_dir):
    c = CylinderPresentation.load(fixtures_dir / "twists" / "empty.json")
    p = PathElement.word(S, "a b'", TruncationContext(6, S.alphabet))
    assert action(c, p) == p


def test_with_N(fixtures_dir):
    c = CylinderPresentation.load(fixtures_dir / "twists" / "bp_straddle.json")
    assert c.with_N(5).ctx.N == 5
    assert zeta_tilde(c.with_N(5)) == zeta_tilde(c)
