"""
Unit tests for the motivic calculus
Tests bidegrees, P ↔ P_V conversion, P⁰/Q evaluation, twisted multiplication
and canonical forms
"""
import pytest

from cohops.models.bidegree import Bidegree
from cohops.models.coefficient_model import builtin_model
from cohops.services.motivic import (
    Direction, MotivicClassExpr, apply_q0, bidegree_of, convert, eval_p0, normalize_motivic,
    pv_vanishes, q_op, specialize_etale, twisted_mul, word_bidegree,
)
from cohops.services.steenrod import BETA, Mode, P, PV, Sq, SqV
from cohops.utils.arith import PrimeContext
from cohops.utils.exceptions import CoefficientModelError, ConversionZoneError, DomainError


class TestBidegrees:
    """Test target bidegrees of single letters and words"""

    @pytest.mark.parametrize('letter,expected', [
        (BETA, (3, 1)), (P(1), (6, 3)), (PV(1), (6, 3)), (PV(2), (10, 5)),
    ])
    def test_odd_letters(self, ctx3, letter, expected):
        """Test letters on H^{2,1} at ℓ=3"""
        assert bidegree_of(letter, Bidegree(2, 1), ctx3) == Bidegree(*expected)

    @pytest.mark.parametrize('letter,expected', [
        (Sq(2), (4, 2)), (SqV(2), (4, 2)), (SqV(3), (5, 2)), (Sq(1), (3, 2)),
    ])
    def test_two_letters(self, ctx2, letter, expected):
        """Test letters on H^{2,1} at ℓ=2"""
        assert bidegree_of(letter, Bidegree(2, 1), ctx2) == Bidegree(*expected)

    def test_word_acts_right_to_left(self, ctx3):
        """Test βP¹ applies P¹ first"""
        assert word_bidegree((BETA, P(1)), Bidegree(2, 1), ctx3) == Bidegree(7, 3)

    def test_pv_vanishing(self):
        """Test P_V^a = 0 when i ≤ a and n < i + a"""
        assert pv_vanishes(2, Bidegree(2, 1))
        assert not pv_vanishes(2, Bidegree(3, 1))
        assert not pv_vanishes(0, Bidegree(0, 0))


class TestConversion:
    """Test P ↔ P_V conversion"""

    def test_p_to_pv(self, ctx3):
        """Test P¹ = [ζ]²P_V¹ on H^{4,2}"""
        result = convert(1, Bidegree(4, 2), Direction.P_TO_PV, ctx3)
        assert result.zeta_exponent == 2
        assert result.operation == PV(1)
        assert result.target == Bidegree(8, 6)
        assert result.label == 'P1 x = [zeta]^2 PV1 x'
        assert not result.power_marker

    def test_power_marker(self, ctx3):
        """Test n = 2a gives the ℓ-th power"""
        result = convert(2, Bidegree(4, 2), Direction.P_TO_PV, ctx3)
        assert result.power_marker
        assert result.zeta_exponent == 0
        assert result.label == 'P2 x = x^ℓ'

    def test_pv_to_p(self, ctx3):
        """Test P_V³ = [ζ]²P³ on H^{6,2}"""
        result = convert(3, Bidegree(6, 2), Direction.PV_TO_P, ctx3)
        assert result.zeta_exponent == 2
        assert result.operation == P(3)

    def test_at_two(self, ctx2):
        """Test Sq^{2a} and Sq_V^{2a} at ℓ=2"""
        result = convert(1, Bidegree(2, 1), Direction.P_TO_PV, ctx2)
        assert result.lhs == Sq(2)
        assert result.operation == SqV(2)
        assert result.zeta_exponent == 0

    def test_unknown_zone(self, ctx3):
        """Test i < n < 2i is refused"""
        with pytest.raises(ConversionZoneError, match="zone i<n<2i"):
            convert(1, Bidegree(3, 2), Direction.P_TO_PV, ctx3)

    def test_range_errors(self, ctx3):
        """Test n ≥ 2a and the direction ranges"""
        with pytest.raises(ConversionZoneError):
            convert(3, Bidegree(4, 2), Direction.PV_TO_P, ctx3)
        with pytest.raises(ConversionZoneError):
            convert(2, Bidegree(6, 1), Direction.P_TO_PV, ctx3)
        with pytest.raises(ConversionZoneError):
            convert(1, Bidegree(6, 2), Direction.PV_TO_P, ctx3)

    def test_requires_d1(self, ctx3_d2):
        """Test [ζ] needs d=1"""
        with pytest.raises(DomainError):
            convert(1, Bidegree(4, 2), Direction.P_TO_PV, ctx3_d2)


class TestP0AndQ:
    """Test P⁰ and Q^a evaluation"""

    def test_eval_p0(self, ctx3, alg_closed3, trivial3):
        """Test P⁰ = b^{i(ℓ−1)/d}"""
        assert eval_p0(Bidegree(4, 2), ctx3, alg_closed3) == (('zeta', 4),)
        assert eval_p0(Bidegree(4, 0), ctx3, trivial3) == ()
        with pytest.raises(CoefficientModelError):
            eval_p0(Bidegree(4, 2), ctx3, trivial3)

    def test_q_positive(self, ctx3, alg_closed3):
        """Test Q¹ = βP¹"""
        expr = q_op(1, Bidegree(2, 1), ctx3, alg_closed3)
        assert expr.terms == {((), (BETA, P(1)), 1): 1}

    def test_q0_motivic_and_etale(self, ctx3, alg_closed3):
        """Test Q⁰ = b^{i(ℓ−1)}β motivically and β étale"""
        motivic = q_op(0, Bidegree(2, 1), ctx3, alg_closed3)
        assert motivic.terms == {((('zeta', 2),), (BETA,), 1): 1}
        etale = q_op(0, Bidegree(2, 1), ctx3, alg_closed3, Mode.ETALE)
        assert etale.terms == {((), (BETA,), 1): 1}

    def test_q_needs_odd(self, ctx2, real_etale):
        """Test Q letters are odd-ℓ only"""
        with pytest.raises(DomainError):
            q_op(1, Bidegree(1, 1), ctx2, real_etale)

    def test_apply_q0_uses_term_weight(self, alg_closed3):
        """Test Q⁰ on x in H^{2,1}"""
        expr = MotivicClassExpr.of_word(alg_closed3, Bidegree(2, 1), ())
        assert apply_q0(expr).format() == 'zeta^2 beta x'


class TestTwistedMultiplication:
    """Test Cartan rewriting with coefficients on the left"""

    def test_unit_coefficient(self, ctx3, alg_closed3):
        """Test P¹(1·y) = P¹y"""
        assert twisted_mul((), (P(1),), ctx3, alg_closed3) == {((), (P(1),)): 1}

    def test_zeta_passes_through_p(self, ctx3, alg_closed3):
        """Test P¹([ζ]y) = [ζ]³P¹y"""
        result = twisted_mul((('zeta', 1),), (P(1),), ctx3, alg_closed3)
        assert result == {((('zeta', 3),), (P(1),)): 1}

    def test_zeta_passes_through_beta(self, ctx3, alg_closed3):
        """Test β([ζ]y) = [ζ]βy"""
        assert twisted_mul((('zeta', 1),), (BETA,), ctx3, alg_closed3) == {((('zeta', 1),), (BETA,)): 1}

    def test_sq1_of_sigma(self, ctx2, real_etale):
        """Test Sq¹(σy) = σ²y + σSq¹y"""
        result = twisted_mul((('sigma', 1),), (Sq(1),), ctx2, real_etale, Mode.ETALE)
        assert result == {((('sigma', 1),), (Sq(1),)): 1, ((('sigma', 2),), ()): 1}

    @pytest.mark.parametrize('word', [(P(0),), (P(1), P(0)), (BETA, P(2))])
    def test_terms_keep_bidegree_of_twisted_source(self, ctx3, alg_closed3, word):
        """Test every α′·w′(y) term lands where w(α·y) does"""
        alpha = alg_closed3.monomial('zeta', 1)
        source = Bidegree(30, 2)
        expected = word_bidegree(word, source + alg_closed3.monomial_bidegree(alpha), ctx3)
        result = twisted_mul(alpha, word, ctx3, alg_closed3)
        assert result
        for m, w in result:
            assert alg_closed3.monomial_bidegree(m) + word_bidegree(w, source, ctx3) == expected

    def test_voevodsky_rejected(self, ctx3, alg_closed3):
        """Test P_V letters have no Cartan formula"""
        with pytest.raises(DomainError):
            twisted_mul((), (PV(1),), ctx3, alg_closed3)


class TestNormalForm:
    """Test canonical forms of class expressions"""

    def test_power_marker(self, alg_closed3):
        """Test P¹x = x³ on H^{2,1}"""
        expr = MotivicClassExpr.of_word(alg_closed3, Bidegree(2, 1), (P(1),))
        assert normalize_motivic(expr).format() == 'x^3'

    def test_p0_evaluated(self, alg_closed3):
        """Test P⁰x = [ζ]²x on H^{2,1}"""
        expr = MotivicClassExpr.of_word(alg_closed3, Bidegree(2, 1), (P(0),))
        assert normalize_motivic(expr).format() == 'zeta^2 x'

    def test_p1_p1_on_class(self, alg_closed3):
        """Test P¹P¹x = 2[ζ]¹²x³ on H^{4,2}"""
        expr = MotivicClassExpr.of_word(alg_closed3, Bidegree(4, 2), (P(1), P(1)))
        assert normalize_motivic(expr).format() == '2 zeta^12 x^3'

    def test_above_excess_vanishes(self, alg_closed3):
        """Test βP¹x = 0 on H^{2,1}"""
        expr = MotivicClassExpr.of_word(alg_closed3, Bidegree(2, 1), (BETA, P(1)))
        assert normalize_motivic(expr).is_zero()

    def test_missing_b(self, trivial3):
        """Test P⁰ on positive weight needs b"""
        expr = MotivicClassExpr.of_word(trivial3, Bidegree(4, 2), (P(1), P(1)))
        with pytest.raises(CoefficientModelError):
            normalize_motivic(expr)

    def test_specialize_etale(self, alg_closed3):
        """Test b ↦ 1 agrees with étale normalization"""
        word = (P(1), P(1))
        motivic = normalize_motivic(MotivicClassExpr.of_word(alg_closed3, Bidegree(4, 2), word))
        etale = normalize_motivic(MotivicClassExpr.of_word(alg_closed3, Bidegree(4, 2), word, Mode.ETALE))
        assert specialize_etale(motivic).terms == etale.terms
        assert specialize_etale(motivic).format() == '2 x^3'

    def test_term_bidegree_etale(self):
        """Test étale weights are read mod d"""
        model = builtin_model('trivial', PrimeContext(3, 2))
        expr = MotivicClassExpr.of_word(model, Bidegree(2, 1), (P(1),), Mode.ETALE)
        key = next(iter(expr.terms))
        assert expr.term_bidegree(key) == Bidegree(6, 1)
