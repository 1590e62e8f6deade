"""
Unit tests for classified operation rings
Tests étale H¹/Hⁿ rings, motivic weight-1 rings, degree-1 enumerators and
conjectural generators
"""
from collections import Counter

import pytest

from cohops.models.bidegree import Bidegree, Window
from cohops.models.coefficient_model import builtin_model
from cohops.models.descriptors import ConjectureOptions
from cohops.services.classify import (
    ClassificationTable, Classifier, conjecture_exclusions, conjecture_generators, etale_ops_H1, etale_ops_Hn,
    motivic_ops_deg1_descent, motivic_ops_deg1_zeta, motivic_ops_weight1,
)
from cohops.services.unstable import cartan_generators
from cohops.utils.arith import PrimeContext
from cohops.utils.exceptions import DomainError, ValidationError


def targets(ops):
    return [op.target.as_list() for op in ops]


class TestEtaleH1:
    """Test x ↦ c·x^ε·β(x)^m on H¹"""

    def test_trivial_coefficients(self, ctx3, trivial3):
        """Test the four non-constant operations up to degree 4"""
        ops = etale_ops_H1(1, trivial3, Window(4), ctx3)
        assert [op.label for op in ops] == ['x', 'beta x', 'x * beta x', '(beta x)^2']
        assert targets(ops) == [[1, 0], [2, 0], [3, 0], [4, 0]]
        assert [op.stable for op in ops] == [True, True, False, False]

    def test_include_constants(self, ctx3, trivial3):
        """Test the constant operation 1"""
        ops = etale_ops_H1(1, trivial3, Window(4), ctx3, include_constants=True)
        assert ops[0].label == '1'
        assert ops[0].target == Bidegree(0, 0)

    def test_twists_mod_d(self, ctx3_d2, local_field):
        """Test twists j + i(ε+m) are read mod d"""
        ops = etale_ops_H1(1, local_field, Window(3), ctx3_d2)
        by_label = {op.label: op.target.as_list() for op in ops}
        assert by_label['x'] == [1, 1]
        assert by_label['beta x'] == [2, 1]
        assert by_label['br * x'] == [3, 0]

    @pytest.mark.parametrize('ell,d,name,i', [(3, 1, 'trivial', 1), (2, 1, 'real-etale', 1), (5, 4, 'trivial', 3)])
    def test_agrees_with_hn(self, ell, d, name, i):
        """Test etale_ops_H1 counts equal the n=1 table"""
        ctx = PrimeContext(ell, d)
        model = builtin_model(name, ctx)
        window = Window(10)
        counts = Counter((op.target.deg, op.target.weight) for op in etale_ops_H1(i, model, window, ctx))
        assert dict(counts) == etale_ops_Hn(1, i, model, window, ctx).table.entries

    def test_agrees_with_hn_for_file_model(self, ctx3_d2, local_field):
        """Test the agreement over a model with relations"""
        window = Window(8)
        counts = Counter((op.target.deg, op.target.weight) for op in etale_ops_H1(1, local_field, window, ctx3_d2))
        assert dict(counts) == etale_ops_Hn(1, 1, local_field, window, ctx3_d2).table.entries


class TestEtaleHn:
    """Test H_et ⊗ H̃*(K_n)"""

    def test_generators_twisted(self, ctx3_d2, finite_field):
        """Test generator twists i·ℓ^k mod d"""
        result = etale_ops_Hn(2, 1, finite_field, Window(8), ctx3_d2)
        assert [g.bidegree.as_list() for g in result.generators] == [[2, 1], [3, 1], [7, 1], [8, 1]]

    def test_table_excludes_unit(self, ctx3, trivial3):
        """Test the reduced table has no (0,0) cell"""
        result = etale_ops_Hn(2, 1, trivial3, Window(8), ctx3)
        assert result.table.dimension(0, 0) == 0
        assert result.table.dimension(2, 0) == 1

    def test_invalid_level(self, ctx3, trivial3):
        """Test n < 1 raises ValidationError"""
        with pytest.raises(ValidationError):
            etale_ops_Hn(0, 1, trivial3, Window(8), ctx3)


class TestMotivicWeight1:
    """Test H^{*,*}(k) ⊗ H̃*(K_n)"""

    def test_k1_at_three(self, ctx3, trivial3):
        """Test u^ε v^m at weights ε+m"""
        result = motivic_ops_weight1(1, trivial3, Window(6), ctx3)
        assert result.table.entries == {(1, 1): 1, (2, 1): 1, (3, 2): 1, (4, 2): 1, (5, 3): 1, (6, 3): 1}
        assert result.relations == []

    def test_weight_zero(self, ctx3, trivial3):
        """Test every generator sits in weight 0"""
        result = motivic_ops_weight1(1, trivial3, Window(4), ctx3, weight=0)
        assert {w for _, w in result.table.entries} == {0}

    def test_k1_relation_at_two(self, ctx2, real_etale):
        """Test u² = [−1]u + [ζ]v at ℓ=2"""
        result = motivic_ops_weight1(1, real_etale, Window(4), ctx2)
        assert [g.label for g in result.generators] == ['u', 'v']
        assert result.relations == ['u^2 = [sigma] u + 0 v']

    def test_k1_at_two_open_weight(self, ctx2, real_etale):
        """Test an étale model with no weight bound reads weights up to the degree bound"""
        result = motivic_ops_weight1(1, real_etale, Window(4), ctx2)
        assert result.table.window == Window(4, 4)
        assert result.table.dimension(1, 1) == 1
        assert result.table.dimension(2, 1) == 1
        assert all(w <= 4 for _, w in result.table.entries)

    def test_k1_relation_alg_closed(self, ctx2):
        """Test [−1] vanishes and [ζ] survives over an algebraically closed field"""
        model = builtin_model('alg-closed', ctx2)
        result = motivic_ops_weight1(1, model, Window(4, 4), ctx2)
        assert result.relations == ['u^2 = 0 u + [zeta] v']

    def test_bad_weight(self, ctx3, trivial3):
        """Test only source weights 0 and 1"""
        with pytest.raises(ValidationError):
            motivic_ops_weight1(1, trivial3, Window(4), ctx3, weight=2)


class TestDegreeOne:
    """Test the ζ ∈ k and Galois-descent enumerators"""

    def test_descent_targets(self, ctx3_d2, local_field):
        """Test the non-constant, ε+m=1 targets over a local field"""
        ops = motivic_ops_deg1_descent(2, local_field, Window(4, 3), ctx3_d2)
        found = {(op.target.deg, op.target.weight) for op in ops
                 if op.data['c'] != '1' and op.data['eps'] + op.data['m'] == 1}
        assert found == {(2, 2), (3, 2), (3, 3), (4, 3)}

    def test_descent_finite_field_even_weights(self, ctx3_d2, finite_field):
        """Test the finite-field model misses (3,3) and (4,3) that the local field reaches"""
        ops = motivic_ops_deg1_descent(2, finite_field, Window(4, 3), ctx3_d2)
        found = {(op.target.deg, op.target.weight) for op in ops}
        assert (2, 2) in found
        assert not found & {(3, 3), (4, 3)}
        assert 'local-field' in finite_field.description

    def test_descent_label(self, ctx3_d2, finite_field):
        """Test ζ^b prefixes for i > 1"""
        ops = motivic_ops_deg1_descent(2, finite_field, Window(2, 2), ctx3_d2, include_constants=False)
        assert 'zeta^1 y' in {op.label for op in ops}

    @pytest.mark.parametrize('ell', [2, 3])
    @pytest.mark.parametrize('i', [1, 2, 3])
    def test_zeta_agrees_with_descent(self, ell, i):
        """Test both enumerators give the same targets when ζ ∈ k"""
        ctx = PrimeContext(ell)
        model = builtin_model('alg-closed', ctx)
        window = Window(8, 8)
        zeta = sorted(op.target for op in motivic_ops_deg1_zeta(i, model, window, ctx))
        descent = sorted(op.target for op in motivic_ops_deg1_descent(i, model, window, ctx))
        assert zeta == descent

    def test_zeta_needs_d1(self, ctx3_d2, finite_field):
        """Test the ζ enumerator refuses d ≠ 1"""
        with pytest.raises(DomainError):
            motivic_ops_deg1_zeta(1, finite_field, Window(4), ctx3_d2)

    def test_zeta_window(self, ctx3, alg_closed3):
        """Test every target lies in the weight-bounded window"""
        ops = motivic_ops_deg1_zeta(1, alg_closed3, Window(4), ctx3)
        assert all(op.target.deg <= 4 and op.target.weight <= 4 for op in ops)


class TestConjecture:
    """Test P^I P_V^J generator candidates"""

    def test_long_generator_at_three(self, ctx3):
        """Test P¹³βP_V⁴βP_V¹β on H^{4,2}"""
        ops = {op.label: op for op in conjecture_generators(4, 2, ctx3, Window(80))}
        op = ops['P13 beta PV4 beta PV1 beta']
        assert op.target == Bidegree(79, 36)
        assert op.data['I'] == [13]
        assert op.data['J'] == [4, 1]

    def test_two_rendering(self, ctx2):
        """Test Sq/Sq_V rendering at ℓ=2"""
        labels = {op.label for op in conjecture_generators(4, 2, ctx2, Window(30))}
        assert 'Sq14 SqV7 SqV3 SqV1' in labels

    def test_pure_p_matches_cartan(self, ctx3):
        """Test J-empty candidates reproduce the Cartan bidegrees"""
        cartan = Counter(g.bidegree for g in cartan_generators(4, ctx3, 40, weight=2))
        pure = Counter(op.target for op in conjecture_generators(4, 2, ctx3, Window(40)) if not op.data['J'])
        assert cartan == pure

    def test_strict_condition_is_smaller(self, ctx3):
        """Test the strict J bound only removes candidates"""
        loose = {op.label for op in conjecture_generators(4, 2, ctx3, Window(40))}
        strict = {op.label for op in conjecture_generators(4, 2, ctx3, Window(40),
                                                           ConjectureOptions(strict_b=True))}
        assert strict < loose

    def test_weights_never_drop(self, ctx3):
        """Test no candidate on H^{2i,i} targets a weight below i"""
        assert conjecture_exclusions(4, 2, ctx3, Window(40)) == []
        assert all(op.target.weight >= 2 for op in conjecture_generators(4, 2, ctx3, Window(40)))

    def test_sorted(self, ctx3):
        """Test descriptors come out in target order"""
        ops = conjecture_generators(6, 2, ctx3, Window(40))
        keys = [op.sort_key() for op in ops]
        assert keys == sorted(keys)

    def test_zone(self, ctx3):
        """Test n < 2i raises DomainError"""
        with pytest.raises(DomainError):
            conjecture_generators(3, 2, ctx3, Window(40))


class TestClassifier:
    """Test the classification service class"""

    def test_list_kind(self, ctx3, trivial3):
        """Test a descriptor kind matches its enumerator"""
        classifier = Classifier(trivial3, Window(4), ctx3)
        assert classifier.run('etale-h1') == etale_ops_H1(1, trivial3, Window(4), ctx3)

    @pytest.mark.parametrize('kind,weight', [('motivic-weight1', 1), ('motivic-weight0', 0)])
    def test_table_kinds(self, ctx3, trivial3, kind, weight):
        """Test the weight-1 and weight-0 kinds return tables"""
        result = Classifier(trivial3, Window(4), ctx3).run(kind)
        assert isinstance(result, ClassificationTable)
        assert result.table.entries == motivic_ops_weight1(1, trivial3, Window(4), ctx3, weight=weight).table.entries

    def test_include_constants_forwarded(self, ctx3_d2, local_field):
        """Test include_constants reaches the descent enumerator"""
        classifier = Classifier(local_field, Window(4, 3), ctx3_d2)
        with_constants = classifier.run('deg1-descent', i=2)
        without = classifier.run('deg1-descent', i=2, include_constants=False)
        assert len(without) < len(with_constants)
        assert all(op.data['eps'] + op.data['m'] > 0 for op in without)

    def test_conjecture_and_exclusions(self, ctx3):
        """Test the conjecture kind and its excluded list"""
        classifier = Classifier(None, Window(40), ctx3)
        opts = ConjectureOptions(strict_b=True)
        assert classifier.run('conjecture', n=4, i=2, opts=opts) == conjecture_generators(4, 2, ctx3, Window(40), opts)
        assert classifier.excluded(4, 2, opts) == []

    def test_unknown_kind(self, ctx3, trivial3):
        """Test an unregistered kind raises ValidationError"""
        with pytest.raises(ValidationError, match="unknown classification kind"):
            Classifier(trivial3, Window(4), ctx3).run('nope')
