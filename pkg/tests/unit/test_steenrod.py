"""
Unit tests for the Steenrod engine
Tests letters, OpPoly arithmetic, admissible sequences and Adem reduction
"""
import itertools

import pytest

from cohops.services.steenrod import (
    BETA, AdmissibleSeq, Mode, OpPoly, P, PV, Sq, UnstableKind, _rewrite_once, adem_reduce,
    adem_relation, admissible_basis, admissible_sequences, cartan_expand, degree_weight, excess,
    format_poly, format_word, is_admissible, is_admissible_word, is_suspension_stable, rewrite_measure,
    split_trailing_frobenius, unstable_evaluate, word_degree, word_moment,
)
from cohops.utils.arith import PrimeContext
from cohops.utils.exceptions import AdemReductionError, ValidationError


def reduce_word(ctx, *letters, mode=Mode.CLASSICAL):
    return format_poly(adem_reduce(OpPoly.word(ctx, letters, mode=mode)))


class TestLetters:
    """Test letter rendering and degrees"""

    def test_format(self):
        """Test the printed forms"""
        assert format_word((P(3), P(1), BETA)) == 'P3 P1 beta'
        assert format_word((Sq(2), Sq(1))) == 'Sq2 Sq1'
        assert format_word(()) == '1'

    def test_degrees(self, ctx3, ctx2):
        """Test internal degrees"""
        assert word_degree((P(1), BETA), ctx3) == 5
        assert word_degree((PV(2),), ctx3) == 8
        assert word_degree((Sq(4), Sq(2)), ctx2) == 6

    def test_moment(self):
        """Test Σ j·s_j over power letters"""
        assert word_moment((P(3), BETA, P(1))) == 3 + 2

    def test_measure_counts_beta_depth(self):
        """Test β depth counts the power letters left of each β"""
        assert rewrite_measure((P(3), BETA, P(1), BETA)) == (5, 1 + 2)
        assert rewrite_measure((BETA, P(2))) == (2, 0)

    def test_suspension_stable(self):
        """Test every letter commutes with suspension"""
        assert is_suspension_stable((P(0), BETA, PV(1)))
        assert is_suspension_stable(())


class TestOpPoly:
    """Test F_ℓ-linear combinations of words"""

    def test_double_beta_is_zero(self, ctx3):
        """Test that words containing ββ are never stored"""
        assert OpPoly.word(ctx3, (P(1), BETA, BETA)).is_zero()

    def test_coefficients_reduce(self, ctx3):
        """Test that coefficients live in F_ℓ"""
        poly = OpPoly.word(ctx3, (P(1),), 2) + OpPoly.word(ctx3, (P(1),), 1)
        assert poly.is_zero()

    def test_composition(self, ctx3):
        """Test that multiplication concatenates words"""
        product = OpPoly.word(ctx3, (P(1),)) * OpPoly.word(ctx3, (BETA,), 2)
        assert product.as_dict() == {(P(1), BETA): 2}

    def test_incompatible_modes(self, ctx3):
        """Test that polynomials of different modes cannot be added"""
        with pytest.raises(ValidationError):
            OpPoly.identity(ctx3) + OpPoly.identity(ctx3, Mode.MOTIVIC)

    def test_format_zero_and_scalar(self, ctx3):
        """Test printing of zero and of the scaled identity"""
        assert format_poly(OpPoly.zero(ctx3)) == '0'
        assert format_poly(OpPoly.identity(ctx3) * 2) == '2'


class TestAdmissibleSequences:
    """Test admissibility, excess and enumeration"""

    def test_from_flat(self, ctx3, ctx2):
        """Test flat-tuple conversion at both primes"""
        seq = AdmissibleSeq.from_flat((0, 3, 0, 1, 1), ctx3)
        assert seq.to_letters(ctx3) == (P(3), P(1), BETA)
        assert AdmissibleSeq.from_flat((2, 1), ctx2).to_letters(ctx2) == (Sq(2), Sq(1))

    def test_from_letters_rejects_double_beta(self, ctx3):
        """Test that ββ has no sequence"""
        with pytest.raises(ValidationError):
            AdmissibleSeq.from_letters((BETA, BETA), ctx3)

    def test_admissibility(self, ctx3, ctx2):
        """Test s_i ≥ ℓs_{i+1} + ε_i and s_i ≥ 2s_{i+1}"""
        assert is_admissible(AdmissibleSeq.from_flat((0, 3, 0, 1, 0), ctx3), ctx3)
        assert not is_admissible(AdmissibleSeq.from_flat((0, 3, 1, 1, 0), ctx3), ctx3)
        assert is_admissible(AdmissibleSeq.from_flat((4, 2), ctx2), ctx2)
        assert not is_admissible(AdmissibleSeq.from_flat((2, 2), ctx2), ctx2)

    def test_excess(self, ctx3, ctx2):
        """Test excess of small sequences"""
        assert excess(AdmissibleSeq.from_flat((0, 1, 0), ctx3), ctx3) == 2
        assert excess(AdmissibleSeq.from_flat((1, 1, 0), ctx3), ctx3) == 3
        assert excess(AdmissibleSeq.from_flat((0, 1, 1), ctx3), ctx3) == 1
        assert excess(AdmissibleSeq.from_flat((2, 1), ctx2), ctx2) == 1

    def test_degree_weight(self, ctx3):
        """Test degree shift and weight multiplier ℓ^k"""
        dw = degree_weight(AdmissibleSeq.from_flat((1, 3, 0, 1, 1), ctx3), ctx3)
        assert dw.delta_degree == 12 + 4 + 2
        assert dw.multiplier == 9
        assert dw.relative_weight == 8

    def test_enumeration_is_admissible_and_sorted(self, ctx3):
        """Test every enumerated sequence is admissible, in degree order"""
        seqs = admissible_sequences(40, ctx3)
        assert all(is_admissible(s, ctx3) for s in seqs)
        degrees = [degree_weight(s, ctx3).delta_degree for s in seqs]
        assert degrees == sorted(degrees)
        assert len({s.flat() for s in seqs}) == len(seqs)

    def test_excess_bound(self, ctx3):
        """Test the excess cut-off"""
        assert all(excess(s, ctx3) <= 2 for s in admissible_sequences(60, ctx3, max_excess=2))

    @pytest.mark.parametrize('degree,expected', [
        (0, ['1']), (3, ['Sq3', 'Sq2 Sq1']), (4, ['Sq4', 'Sq3 Sq1']),
        (6, ['Sq6', 'Sq5 Sq1', 'Sq4 Sq2']),
    ])
    def test_basis_at_two(self, ctx2, degree, expected):
        """Test admissible bases at ℓ=2 in low degrees"""
        assert sorted(format_word(w) for w in admissible_basis(degree, ctx2)) == sorted(expected)

    @pytest.mark.parametrize('degree,expected', [
        (1, ['beta']), (4, ['P1']), (5, ['beta P1', 'P1 beta']), (10, ['beta P2 beta']),
        (16, ['P4', 'P3 P1']),
    ])
    def test_basis_at_three(self, ctx3, degree, expected):
        """Test admissible bases at ℓ=3"""
        assert sorted(format_word(w) for w in admissible_basis(degree, ctx3)) == sorted(expected)


class TestAdemReduction:
    """Test rewriting to admissible normal form"""

    def test_p1_p1_classical(self, ctx3):
        """Test P¹P¹ = 2P² at ℓ=3"""
        assert reduce_word(ctx3, P(1), P(1)) == '2 P2'

    def test_p1_p1_motivic(self, ctx3):
        """Test that motivic mode keeps the P⁰ letter"""
        assert reduce_word(ctx3, P(1), P(1), mode=Mode.MOTIVIC) == '2 P2 P0'

    def test_bockstein_relation(self, ctx3):
        """Test P¹βP¹ = βP² + P²β at ℓ=3"""
        poly = adem_reduce(OpPoly.word(ctx3, (P(1), BETA, P(1))))
        assert poly.as_dict() == {(BETA, P(2)): 1, (P(2), BETA): 1}

    @pytest.mark.parametrize('a,b,expected', [
        (1, 1, '0'), (1, 2, 'Sq3'), (2, 2, 'Sq3 Sq1'), (3, 2, '0'),
    ])
    def test_square_relations(self, ctx2, a, b, expected):
        """Test classical Adem relations for Sq"""
        assert reduce_word(ctx2, Sq(a), Sq(b)) == expected

    def test_sq2_sq3(self, ctx2):
        """Test Sq²Sq³ = Sq⁵ + Sq⁴Sq¹"""
        poly = adem_reduce(OpPoly.word(ctx2, (Sq(2), Sq(3))))
        assert poly.as_dict() == {(Sq(5),): 1, (Sq(4), Sq(1)): 1}

    def test_beta_becomes_sq1(self, ctx2):
        """Test that β is read as Sq¹ at ℓ=2"""
        assert reduce_word(ctx2, BETA, BETA) == '0'
        assert reduce_word(ctx2, Sq(1), BETA) == '0'

    def test_p0_classical_deleted(self, ctx3):
        """Test P⁰ is the identity outside motivic mode"""
        assert reduce_word(ctx3, P(0), P(1)) == 'P1'

    def test_p0_pushed_right(self, ctx3):
        """Test P⁰β = βP⁰ and P⁰P¹ = P¹P⁰ in motivic mode"""
        assert reduce_word(ctx3, P(0), BETA, mode=Mode.MOTIVIC) == 'beta P0'
        assert reduce_word(ctx3, P(0), P(1), mode=Mode.MOTIVIC) == 'P1 P0'

    def test_idempotent_and_degree_preserving(self, ctx5):
        """Test reduction output is admissible, stable and homogeneous"""
        word = (P(2), P(3), BETA, P(1))
        reduced = adem_reduce(OpPoly.word(ctx5, word))
        assert all(is_admissible_word(w, ctx5) for w in reduced.words())
        assert adem_reduce(reduced) == reduced
        assert {word_degree(w, ctx5) for w in reduced.words()} <= {word_degree(word, ctx5)}

    def test_voevodsky_letters_rejected(self, ctx3):
        """Test formal P_V letters raise AdemReductionError"""
        with pytest.raises(AdemReductionError):
            adem_reduce(OpPoly.word(ctx3, (PV(1), P(1))))

    def test_wrong_family(self, ctx3, ctx2):
        """Test Sq at odd ℓ and P at ℓ=2 are rejected"""
        with pytest.raises(ValidationError):
            adem_reduce(OpPoly.word(ctx3, (Sq(1),)))
        with pytest.raises(ValidationError):
            adem_reduce(OpPoly.word(ctx2, (P(1),)))

    def test_adem_relation_display(self, ctx2, ctx3):
        """Test single-relation helper"""
        assert format_poly(adem_relation(2, 2, ctx2)) == 'Sq3 Sq1'
        assert format_poly(adem_relation(1, 1, ctx3)) == '2 P2'

    def test_split_trailing_frobenius(self):
        """Test splitting off the P⁰ block"""
        assert split_trailing_frobenius((P(2), P(0), P(0))) == ((P(2),), 2)
        assert split_trailing_frobenius((P(0), BETA)) == ((P(0), BETA), 0)


class TestTerminationMeasure:
    """Test the rewrite measure drops under every rule"""

    @pytest.mark.parametrize('ell', [2, 3, 5])
    def test_every_rewrite_lowers_measure(self, ell):
        """Test (moment, β depth) drops from each word to every word it rewrites to"""
        ctx = PrimeContext(ell)
        letters = [BETA] + [P(a) for a in range(6)] if ctx.is_odd else [Sq(a) for a in range(1, 7)]
        for k in (2, 3):
            for word in itertools.product(letters, repeat=k):
                for new_word, _ in _rewrite_once(word, ctx) or []:
                    assert rewrite_measure(new_word) < rewrite_measure(word), \
                        f"{format_word(word)} -> {format_word(new_word)}"

    def test_power_pairs_lower_moment(self, ctx2, ctx3):
        """Test P^aP^b and Sq^aSq^b substitutions lower the moment itself"""
        for a in range(0, 12):
            for b in range(1, 5):
                if a < 3 * b:
                    for new_word, _ in _rewrite_once((P(a), P(b)), ctx3):
                        assert word_moment(new_word) < word_moment((P(a), P(b)))
                if 0 < a < 2 * b:
                    for new_word, _ in _rewrite_once((Sq(a), Sq(b)), ctx2):
                        assert word_moment(new_word) < word_moment((Sq(a), Sq(b)))

    def test_boundary_term_moves_beta(self, ctx3):
        """Test P³βP¹ reaches βP³P¹ with equal moment and smaller β depth"""
        rewritten = dict(_rewrite_once((P(3), BETA, P(1)), ctx3))
        assert (BETA, P(3), P(1)) in rewritten
        assert word_moment((BETA, P(3), P(1))) == word_moment((P(3), BETA, P(1)))


class TestUnstableEvaluation:
    """Test evaluation of P^I on ι_n"""

    def test_power(self, ctx3):
        """Test P¹ι₂ = ι₂³"""
        value = unstable_evaluate(AdmissibleSeq.from_flat((0, 1, 0), ctx3), 2, ctx3)
        assert value.kind is UnstableKind.POWER
        assert value.exponent == 3
        assert value.seq.to_letters(ctx3) == ()

    def test_power_of_bockstein(self, ctx3):
        """Test P¹βι₁ = (βι₁)³"""
        value = unstable_evaluate(AdmissibleSeq.from_flat((0, 1, 1), ctx3), 1, ctx3)
        assert value.kind is UnstableKind.POWER
        assert value.seq.to_letters(ctx3) == (BETA,)

    def test_zero_and_basis(self, ctx3, ctx2):
        """Test excess above n vanishes and below n is free"""
        assert unstable_evaluate(AdmissibleSeq.from_flat((0, 1, 0), ctx3), 1, ctx3).kind is UnstableKind.ZERO
        assert unstable_evaluate(AdmissibleSeq.from_flat((0, 1, 0), ctx3), 3, ctx3).kind is UnstableKind.BASIS
        assert unstable_evaluate(AdmissibleSeq.from_flat((2,), ctx2), 1, ctx2).kind is UnstableKind.ZERO

    def test_inadmissible_rejected(self, ctx2):
        """Test that unreduced sequences are refused"""
        with pytest.raises(ValidationError):
            unstable_evaluate(AdmissibleSeq.from_flat((1, 1), ctx2), 3, ctx2)

    def test_cartan_expand(self):
        """Test P²(uv) terms"""
        ctx = PrimeContext(3)
        assert cartan_expand(P(2), ctx) == [(P(0), P(2)), (P(1), P(1)), (P(2), P(0))]
        with pytest.raises(ValidationError):
            cartan_expand(BETA, ctx)
