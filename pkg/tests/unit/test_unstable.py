"""
Unit tests for unstable operation rings
Tests Cartan generators, monomial bases and the Borel–Kudo iterator
"""
from dataclasses import replace

import pytest

from cohops.models.bidegree import Bidegree, Window
from cohops.services.steenrod import BETA, P, Sq
from cohops.services.unstable import (
    borel_step, cartan_generators, ell_simple_system, enumerate_monomials, iterate_borel,
    k1_generators, monomial_basis, safe_window,
)
from cohops.utils.arith import PrimeContext
from cohops.utils.exceptions import DomainError, ValidationError


def bidegrees(gens):
    return sorted(g.bidegree.as_list() for g in gens)


class TestCartanGenerators:
    """Test the Cartan description of H*(K_n)"""

    def test_k2_at_three(self, ctx3):
        """Test ι, βι, P¹βι, βP¹βι up to degree 8"""
        gens = cartan_generators(2, ctx3, 8)
        assert [g.label for g in gens] == ['i2', 'beta i2', 'P1 beta i2', 'beta P1 beta i2']
        assert bidegrees(gens) == [[2, 1], [3, 1], [7, 3], [8, 3]]

    def test_k2_at_two(self, ctx2):
        """Test ι, Sq¹ι, Sq²Sq¹ι, Sq⁴Sq²Sq¹ι"""
        gens = cartan_generators(2, ctx2, 10)
        assert [g.letters for g in gens] == [(), (Sq(1),), (Sq(2), Sq(1)), (Sq(4), Sq(2), Sq(1))]
        assert [g.weight for g in gens] == [1, 2, 4, 8]

    def test_weight_scaling(self, ctx3):
        """Test weight i·ℓ^k for a twisted fundamental class"""
        gens = cartan_generators(2, ctx3, 8, weight=2)
        assert [g.weight for g in gens] == [2, 2, 6, 6]

    def test_exterior_flags(self, ctx3):
        """Test that odd generators are exterior at odd ℓ"""
        gens = cartan_generators(2, ctx3, 8)
        assert [g.exterior for g in gens] == [False, True, True, False]

    def test_invalid_level(self, ctx3):
        """Test n < 1 raises ValidationError"""
        with pytest.raises(ValidationError):
            cartan_generators(0, ctx3, 10)


class TestMonomialBasis:
    """Test Poincaré tables and monomial listings"""

    def test_k1_table(self, ctx3):
        """Test H*(K_1) = E[u] ⊗ F₃[v] up to degree 6"""
        table = monomial_basis(k1_generators(ctx3), Window(6), ctx3)
        assert dict(table.items()) == {
            (0, 0): 1, (1, 1): 1, (2, 1): 1, (3, 2): 1, (4, 2): 1, (5, 3): 1, (6, 3): 1,
        }

    def test_reduced_drops_unit(self, ctx3):
        """Test reduced tables omit (0,0)"""
        table = monomial_basis(k1_generators(ctx3), Window(6), ctx3, reduced=True)
        assert table.dimension(0, 0) == 0
        assert table.dimension(2, 1) == 1

    def test_listing_matches_counts(self, ctx3):
        """Test enumerate_monomials agrees with monomial_basis"""
        gens = cartan_generators(2, ctx3, 20)
        window = Window(20)
        listing = enumerate_monomials(gens, window)
        table = monomial_basis(gens, window, ctx3)
        counts = {}
        for m in listing:
            key = (m.bidegree.deg, m.bidegree.weight)
            counts[key] = counts.get(key, 0) + 1
        assert counts == dict(table.items())

    def test_monomial_text(self, ctx3):
        """Test printed monomials"""
        listing = enumerate_monomials(k1_generators(ctx3), Window(4))
        assert [str(m) for m in listing] == ['1', '(u)', '(v)', '(u) * (v)', '(v)^2']

    def test_duplicate_labels(self, ctx3):
        """Test duplicate generator labels are rejected"""
        u = k1_generators(ctx3)[0]
        with pytest.raises(ValidationError, match="duplicate"):
            monomial_basis([u, u], Window(4), ctx3)


class TestSimpleSystems:
    """Test ℓ-simple systems"""

    def test_power_family(self, ctx3):
        """Test v, v³ = P¹v, v⁹ = P³P¹v"""
        v = k1_generators(ctx3)[1]
        system = ell_simple_system([v], Window(20), ctx3)
        assert bidegrees(system) == [[2, 1], [6, 3], [18, 9]]
        assert system[2].letters == (P(3), P(1), BETA)

    def test_odd_generators_unchanged(self, ctx3):
        """Test exterior generators are not expanded"""
        u = k1_generators(ctx3)[0]
        assert ell_simple_system([u], Window(20), ctx3) == [u]


class TestBorel:
    """Test Borel transgression with Kudo's rules"""

    def test_step_from_k1(self, ctx3):
        """Test τ(u) = ι₂, τ(v) = −βι₂ and the Kudo class"""
        u, v = [replace(g, name=None) for g in k1_generators(ctx3)]
        out = borel_step([u, v], ctx3)
        assert [g.bidegree.as_list() for g in out] == [[2, 1], [3, 1], [8, 3]]
        assert out[1].sign == -1
        assert out[2].letters == (BETA, P(1), BETA)

    def test_non_transgressive_rejected(self, ctx3):
        """Test DomainError for a generator not marked transgressive"""
        u = replace(k1_generators(ctx3)[0], transgressive=False)
        with pytest.raises(DomainError):
            borel_step([u], ctx3)

    @pytest.mark.parametrize('ell,n,max_degree', [(3, 2, 30), (3, 3, 30), (2, 2, 20), (2, 3, 20), (5, 2, 40)])
    def test_agrees_with_cartan(self, ell, n, max_degree):
        """Test Borel iteration reproduces the Cartan bidegrees"""
        ctx = PrimeContext(ell)
        window = Window(max_degree)
        borel = iterate_borel('K1', n, ctx, window).generators
        cartan = [g for g in cartan_generators(n, ctx, max_degree) if window.contains(g.bidegree)]
        assert bidegrees(borel) == bidegrees(cartan)

    def test_k3_degrees(self, ctx3):
        """Test K_3 generator degrees at ℓ=3 up to degree 30"""
        degrees = sorted(g.degree for g in iterate_borel('K1', 3, ctx3, Window(30)).generators)
        assert degrees == [3, 4, 7, 8, 8, 9, 19, 20, 20, 21, 25, 26]

    def test_from_k2(self, ctx3):
        """Test starting from the Cartan set of K_2"""
        from_k1 = iterate_borel('K1', 3, ctx3, Window(30)).generators
        from_k2 = iterate_borel('K2', 3, ctx3, Window(30)).generators
        assert bidegrees(from_k1) == bidegrees(from_k2)

    def test_safe_window_covers_request(self, ctx3):
        """Test truncation leaves the whole window complete"""
        result = iterate_borel('K1', 4, ctx3, Window(30))
        assert result.window == Window(30)
        assert result.safe_window == Window(30)

    def test_safe_window_stops_below_floor(self):
        """Test a floor inside the window caps the safe degree"""
        assert safe_window(Window(30), [Bidegree(12, 3)]) == Window(11)
        assert safe_window(Window(30), [Bidegree(40, 1), Bidegree(25, 9)]) == Window(24)

    def test_safe_window_ignores_heavy_floors(self):
        """Test a floor above the weight bound never reaches the window"""
        assert safe_window(Window(30, 2), [Bidegree(12, 3)]) == Window(30, 2)

    def test_dropped_powers_recorded(self, ctx3):
        """Test the first power outside the window is reported"""
        v = k1_generators(ctx3)[1]
        dropped = []
        family = ell_simple_system([v], Window(20), ctx3, dropped)
        assert [g.degree for g in family] == [2, 6, 18]
        assert dropped == [Bidegree(54, 27)]

    def test_argument_errors(self, ctx3):
        """Test bad base, level and window"""
        with pytest.raises(ValidationError):
            iterate_borel('K3', 4, ctx3, Window(30))
        with pytest.raises(ValidationError):
            iterate_borel('K1', 1, ctx3, Window(30))
        with pytest.raises(DomainError, match="window too small"):
            iterate_borel('K1', 4, ctx3, Window(3))

    def test_k1_at_two(self, ctx2):
        """Test H*(K_1) = F₂[u] at ℓ=2"""
        gens = k1_generators(ctx2)
        assert len(gens) == 1
        assert gens[0].exterior is False
        assert gens[0].bidegree == Bidegree(1, 1)
