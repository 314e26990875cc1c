import json

import pytest
from hypothesis import given

from totaljohnson.surface import FatSurface, StdEmbedding, SurfaceError, crossing_sign, double, remove_disks, standard_surface
from totaljohnson.words import GroupHom

from strategies import surfaces


@pytest.mark.parametrize("g,b", [(1, 1), (2, 1), (1, 2), (0, 3), (3, 1)])
def test_standard_surface_topology(g, b):
    s = standard_surface(g, b)
    assert (s.genus, s.boundary_count) == (g, b)
    assert s.euler_characteristic == 1 - s.rank
    assert len(s.boundary_words()) == b


def test_torus_boundary_word_is_the_commutator():
    s = standard_surface(1)
    (w,) = s.boundary_words()
    assert len(w.letters) == 4
    assert s.homology(w.word()) == (0, 0)


@given(surfaces())
def test_euler_characteristic_formula(s):
    assert 2 - 2 * s.genus - s.boundary_count == s.euler_characteristic
    assert sum(len(w.letters) for w in s.boundary_face_words()) == 2 * s.rank


@given(surfaces())
def test_intersection_matrix_is_antisymmetric(s):
    m = s.intersection_matrix()
    n = s.rank
    assert all(m[i][j] == -m[j][i] for i in range(n) for j in range(n))


def test_intersection_of_standard_pair():
    m = standard_surface(1).intersection_matrix()
    assert abs(m[0][1]) == 1 and m[0][0] == 0


def test_crossing_sign_is_antisymmetric():
    assert crossing_sign(0, 4, 2, 6, 8) == 1
    assert crossing_sign(2, 6, 0, 4, 8) == -1
    assert crossing_sign(0, 2, 4, 6, 8) == 0


def test_bad_orders_rejected():
    with pytest.raises(SurfaceError):
        FatSurface.from_json({"order": ["a", "b", "a'"]})
    with pytest.raises(SurfaceError):
        FatSurface.from_json({"names": ["a"]})
    with pytest.raises(SurfaceError):
        FatSurface.from_json({"rank": 3, "order": ["a", "a'"]})


def test_json_roundtrip(tmp_path):
    s = standard_surface(2)
    p = tmp_path / "s.json"
    p.write_text(json.dumps(s.to_json()))
    assert FatSurface.load(p) == s


@pytest.mark.parametrize("disks", [1, 2])
def test_standard_embedding_maps(disks):
    s = standard_surface(1)
    e = StdEmbedding.standard(s, disks)
    ident = GroupHom.identity(e.sigma_st.alphabet)
    assert e.kappa.compose(e.iota0) == ident
    assert e.kappa.compose(e.iota1) == ident
    assert e.e_st.compose(e.section) == GroupHom.identity(s.alphabet)
    assert e.sigma_tilde.euler_characteristic == 2 * e.sigma_st.euler_characteristic


def test_remove_disks_adds_boundaries():
    s = standard_surface(1)
    st_, e = remove_disks(s, 2)
    assert st_.boundary_count == 3 and st_.genus == 1
    assert e.target == s.alphabet


def test_double_has_expected_genus():
    st_, _ = remove_disks(standard_surface(1), 1)
    tilde, i0, i1, k = double(st_, (2,))
    assert tilde.genus == 2
    # both outer boundaries survive the gluing
    assert tilde.boundary_count == 2


def test_embedding_json_roundtrip():
    e = StdEmbedding.standard(standard_surface(1), 1)
    again = StdEmbedding.from_json(e.to_json())
    assert again.kappa == e.kappa and again.sigma_tilde == e.sigma_tilde


def test_broken_embedding_rejected():
    e = StdEmbedding.standard(standard_surface(1), 1)
    data = e.to_json()
    data["kappa"] = {n: "1" for n in e.sigma_tilde.alphabet.names}
    with pytest.raises(SurfaceError):
        StdEmbedding.from_json(data)


def test_trivial_embedding_is_degenerate():
    e = StdEmbedding.trivial(standard_surface(2))
    assert e.degenerate and e.kappa.is_identity()
