from fractions import Fraction

import pytest

from totaljohnson.cylinder import CylinderPresentation, zeta_tilde
from totaljohnson.goldman import DegreeError, GoldmanElement
from totaljohnson.johnson import HomologyTensor, cyclic_symmetrize, filtration_degree_of_cylinder, lambda_map, tau
from totaljohnson.magnus import TensorSeries, TruncationContext, cyclic_project
from totaljohnson.surface import standard_surface

S = standard_surface(2)


def key_element(key, N=6, coeff=1):
    return GoldmanElement.from_series(S, cyclic_project(TensorSeries.monomial(key, N, coeff)), TruncationContext(N, S.alphabet))


def test_cyclic_symmetrize_counts_repeats():
    assert cyclic_symmetrize((0, 1, 2)) == {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1}
    assert cyclic_symmetrize((0, 1, 0, 1)) == {(0, 1, 0, 1): 2, (1, 0, 1, 0): 2}


def test_lambda_map_is_cyclic():
    t = lambda_map(key_element((0, 1, 3)), 3)
    assert t.is_cyclic()
    assert t.coefficients[(1, 3, 0)] == 1


def test_tau_reads_the_right_degree():
    z = key_element((0, 1, 2)) + key_element((0, 0, 1, 1), coeff=2)
    assert tau(1, z).coefficients == lambda_map(z, 3).coefficients
    with pytest.raises(DegreeError):
        tau(2, z)
    assert tau(2, key_element((0, 0, 1, 1), coeff=2)).degree == 4


def test_tau_preconditions():
    with pytest.raises(ValueError):
        tau(0, key_element((0, 1, 2)))
    with pytest.raises(DegreeError):
        tau(1, key_element((0, 1)))
    with pytest.raises(DegreeError):
        tau(3, key_element((0, 1, 2), N=5))


def test_homology_tensor_arithmetic_and_format():
    a = HomologyTensor(2, {(0, 1): 1}, ["x", "y"])
    b = HomologyTensor(2, {(0, 1): -1, (1, 0): Fraction(1, 2)})
    s = a + b
    assert s.coefficients == {(1, 0): Fraction(1, 2)}
    assert s.format() == "+1/2 * e_y⊗e_x"
    assert HomologyTensor(3, {}).format() == "0"
    with pytest.raises(ValueError):
        HomologyTensor(2, {(0,): 1})
    with pytest.raises(ValueError):
        a + HomologyTensor(3, {})


@pytest.mark.parametrize(
    "name,expected",
    [("bp_genus2", 1), ("separating_genus2", 2), ("knot_straddle", 2), ("empty", 4)],
)
def test_filtration_degree(fixtures_dir, name, expected):
    c = CylinderPresentation.load(fixtures_dir / "twists" / f"{name}.json", 6)
    assert filtration_degree_of_cylinder(c) == expected


def test_separating_twist_has_no_tau1(fixtures_dir):
    c = CylinderPresentation.load(fixtures_dir / "twists" / "separating_genus2.json", 6)
    z = zeta_tilde(c)
    assert z.degree() == 4
    assert tau(2, z).is_cyclic() and not tau(2, z).is_zero()
