import itertools
import logging
import random

import pytest

from closedkschur import cache
from closedkschur.katalan import (
    KatalanSpec,
    clear_memo,
    closed_kschur,
    closed_spec,
    combination_normal_form,
    combination_vanishes,
    expand_combination,
    expand_katalan,
    generalized_closed,
    kk_zero_instances,
    lower_spec,
    lowering_sum,
    mirror2_instances,
    mirror_instances,
    verify_kk_zero,
    verify_mirror,
    verify_mirror2,
    verify_nilpotence,
    verify_relations,
)
from closedkschur.oracle import enumerate_partitions
from closedkschur.rootideal import RootIdeal, all_root_ideals, multiset_from_mults
from closedkschur.suites import random_spec, relation_verdicts
from closedkschur.symfunc import ZERO, e_perp, g_det, h, k_vector

h1 = h(1)


def naive_expand(spec):
    """Expand every operator product into its 2^n signed terms, with no merging or pruning."""
    ell = spec.ell
    comp = spec.psi.complement()
    lowers = multiset_from_mults(spec.mults)
    total = ZERO
    for nr in range(len(comp) + 1):
        for rsub in itertools.combinations(comp, nr):
            for nl in range(len(lowers) + 1):
                for lsub in itertools.combinations(range(len(lowers)), nl):
                    g = list(spec.gamma)
                    for i, j in rsub:
                        g[i - 1] += 1
                        g[j - 1] -= 1
                    for t in lsub:
                        g[lowers[t] - 1] -= 1
                    term = k_vector(g)
                    total = total - term if (nr + nl) % 2 else total + term
    return total


def random_specs(n, ell_max=4, mult_max=1, seed=0, gamma_min=-1, gamma_max=3):
    rng = random.Random(seed)
    return [random_spec(rng, rng.randint(1, ell_max), gamma_max, mult_max, gamma_min) for _ in range(n)]


class TestSpec:
    def test_rejects_wrong_lengths(self):
        with pytest.raises(ValueError):
            KatalanSpec(RootIdeal.empty(2), (0,), (1, 1))

    def test_make_from_multiset(self):
        spec = KatalanSpec.make(RootIdeal.empty(3), [3, 2, 3], (1, 1, 1))
        assert spec.mults == (0, 1, 2)


class TestExpandKatalan:
    def test_empty_data_is_g_det(self):
        for gamma in [(2, 1), (1, 1), (3, 0, 2), (0, 2, 1)]:
            ell = len(gamma)
            assert expand_katalan(KatalanSpec(RootIdeal.empty(ell), (0,) * ell, gamma)) == g_det(gamma)

    def test_two_row_example(self):
        spec = KatalanSpec.make(RootIdeal.from_roots(2, [(1, 2)]), [2], (1, 1))
        assert expand_katalan(spec) == h1 * h1

    @pytest.mark.parametrize("spec", random_specs(60, seed=1), ids=str)
    def test_matches_naive_expansion(self, spec):
        assert expand_katalan(spec) == naive_expand(spec)

    @pytest.mark.parametrize("spec", random_specs(60, mult_max=2, seed=2, gamma_min=-3), ids=str)
    def test_methods_agree(self, spec):
        assert expand_katalan(spec, "superscript") == expand_katalan(spec, "operator")

    @pytest.mark.parametrize("seed", range(30))
    def test_factor_order_irrelevant(self, seed):
        rng = random.Random(seed)
        spec = random_spec(rng, rng.randint(2, 5), 3, 2, 0)
        roots = spec.psi.complement()
        a, b = roots[:], roots[:]
        rng.shuffle(a)
        rng.shuffle(b)
        assert expand_katalan(spec, order=a) == expand_katalan(spec, order=b)
        assert expand_katalan(spec, "operator", order=a) == expand_katalan(spec)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            expand_katalan(KatalanSpec(RootIdeal.empty(1), (0,), (1,)), "nope")

    @pytest.mark.parametrize("ell", range(1, 6))
    def test_g_det_agreement_sweep(self, ell):
        for gamma in itertools.product(range(-2, 5), repeat=min(ell, 3)):
            gamma = gamma + (1,) * (ell - len(gamma))
            spec = KatalanSpec(RootIdeal.empty(ell), (0,) * ell, gamma)
            assert expand_katalan(spec) == g_det(gamma)


class TestClosed:
    @pytest.mark.parametrize("n,k", [(n, k) for k in range(1, 5) for n in range(k + 1)])
    def test_single_row(self, n, k):
        assert closed_kschur((n,), k, 1) == h(n)

    def test_column_example(self):
        assert closed_kschur((1, 1), 1, 2) == h1 * h1

    def test_against_naive(self):
        assert closed_kschur((2, 1), 2) == naive_expand(closed_spec((2, 1), 2))

    def test_small_parts_give_g_det(self):
        for lam in [(3, 2, 1), (2, 2), (4, 1)]:
            assert closed_kschur(lam, lam[0] + len(lam) - 1) == g_det(lam)

    def test_rejects_large_part(self):
        with pytest.raises(ValueError, match="exceeds"):
            closed_kschur((4, 1), 3)

    def test_rejects_non_partition(self):
        with pytest.raises(ValueError):
            closed_kschur((1, 2), 3)

    @pytest.mark.parametrize("k,ell", [(k, ell) for k in range(1, 5) for ell in range(1, 5)])
    def test_zero_padding(self, k, ell):
        for lam in enumerate_partitions(k, k * ell, max_length=ell):
            assert closed_kschur(lam, k, ell) == closed_kschur(lam, k, ell + 1)

    @pytest.mark.parametrize("k", range(1, 5))
    def test_top_degree(self, k):
        for lam in enumerate_partitions(k, 3 * k, max_length=3):
            f = closed_kschur(lam, k)
            assert f.degree() == sum(lam)
            assert not f.homogeneous_part(sum(lam)).is_zero()

    def test_generalized_matches_straightened(self):
        assert generalized_closed((5, 1, 2, 1, 1, 1), 5) == closed_kschur((5, 1, 1, 1, 1, 1), 5, 6)

    def test_generalized_of_partition(self):
        assert generalized_closed((2, 1), 2) == closed_kschur((2, 1), 2)

    def test_generalized_small_ascent(self):
        assert generalized_closed((1, 2), 2) == naive_expand(closed_spec((1, 2), 2))

    def test_generalized_rejects_big_ascent(self):
        with pytest.raises(ValueError):
            generalized_closed((0, 2), 2)


class TestCombinations:
    @pytest.mark.parametrize("seed", range(40))
    def test_normal_form_detects_zero_exactly(self, seed):
        rng = random.Random(seed)
        ell = rng.randint(1, 4)
        psi = rng.choice(all_root_ideals(ell))
        specs = [KatalanSpec(psi, tuple(rng.randint(0, 2) for _ in range(ell)),
                             tuple(rng.randint(-1, 3) for _ in range(ell))) for _ in range(3)]
        terms = [(rng.randint(-2, 2), s) for s in specs]
        assert combination_vanishes(terms) == expand_combination(terms).is_zero()
        # a relation that must cancel, mixed with its own terms
        rel = [(1, specs[0]), (-1, specs[0].with_mult(1, 1)), (-1, lower_spec(specs[0], 1))]
        assert combination_vanishes(rel)
        assert not combination_normal_form(rel)

    def test_expand_combination_is_linear(self):
        a, b = random_specs(2, seed=5)
        assert expand_combination([(2, a), (-3, b)]) == expand_katalan(a).scale(2) - expand_katalan(b).scale(3)

    def test_nonzero_detected(self):
        spec = KatalanSpec(RootIdeal.empty(2), (0, 0), (1, 1))
        assert not combination_vanishes([(1, spec)])


class TestLowerSpec:
    def test_to_zero(self):
        spec = KatalanSpec(RootIdeal.empty(3), (0, 0, 0), (1, 1, 1))
        for z in (1, 2, 3):
            spec = lower_spec(spec, z)
        assert spec.gamma == (0, 0, 0)

    def test_twice(self):
        spec = KatalanSpec(RootIdeal.empty(3), (0, 1, 0), (2, 2, 2))
        assert lower_spec(lower_spec(spec, 2), 2) == lower_spec(spec, 2, 2)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            lower_spec(KatalanSpec(RootIdeal.empty(1), (0,), (1,)), 2)

    def test_e_perp_on_katalan(self):
        for spec in random_specs(25, ell_max=4, mult_max=1, seed=7, gamma_min=0):
            for d in range(spec.ell + 1):
                assert e_perp(d, expand_katalan(spec)) == expand_combination(
                    [(1, s) for s in lowering_sum(spec, d)])


class TestRelations:
    SPEC = KatalanSpec.make(RootIdeal.from_roots(4, [(1, 3), (1, 4), (2, 4)]), [3, 4, 4], (3, 2, 1, 3))

    def test_removable_example(self):
        assert verify_relations(self.SPEC, "a", (1, 3)).holds

    def test_one_row(self):
        spec = KatalanSpec(RootIdeal.empty(1), (0,), (3,))
        assert verify_relations(spec, "d", 1).holds
        assert verify_relations(spec.with_mult(1, 1), "c", 1).holds

    def test_rejects_bad_argument(self):
        with pytest.raises(ValueError):
            verify_relations(self.SPEC, "a", (1, 4))
        with pytest.raises(ValueError):
            verify_relations(self.SPEC, "c", 1)

    def test_enumerated(self):
        verdicts = list(relation_verdicts(seed=11, count=250))
        assert len(verdicts) >= 200
        assert {v.lemma for v in verdicts} == {"relation_a", "relation_b", "relation_c", "relation_d"}
        assert all(v.holds for v in verdicts)


class TestKKZero:
    def test_all_instances_l3(self):
        n = 0
        for spec, z in kk_zero_instances(3, mult_max=2):
            assert verify_kk_zero(spec, z).holds
            n += 1
        assert n > 100

    def test_fixed_point(self):
        psi = RootIdeal.empty(2)
        spec = KatalanSpec(psi, (0, 1), (1, 2))
        v = verify_kk_zero(spec, 1)
        assert v.holds
        # gamma_{z+1} = gamma_z + 1 is fixed by the swap, so K itself vanishes
        assert expand_katalan(spec).is_zero()

    def test_hypotheses_not_met(self):
        v = verify_kk_zero(KatalanSpec(RootIdeal.empty(2), (0, 0), (1, 1)), 1)
        assert v.status == "not_applicable"


class TestMirrors:
    @pytest.mark.parametrize("ell", range(2, 5))
    def test_first_mirror_lemma(self, ell):
        branches = set()
        for spec, y, z in mirror_instances(ell, mult_max=2):
            v = verify_mirror(spec, y, z)
            assert v.holds, v
            branches.add(v.branch)
            if v.branch == "zero":
                assert expand_katalan(spec).is_zero()
        assert branches == {"zero", "shift"} or ell == 2

    @pytest.mark.parametrize("ell", range(2, 5))
    def test_second_mirror_lemma(self, ell):
        for spec, y, z in mirror2_instances(ell, mult_max=2):
            assert verify_mirror2(spec, y, z).holds

    def test_not_applicable(self):
        spec = KatalanSpec(RootIdeal.empty(3), (0, 0, 0), (1, 1, 1))
        assert verify_mirror(spec, 1, 1).status == "not_applicable"
        assert verify_mirror2(spec, 1, 1).status == "not_applicable"


class TestNilpotence:
    def test_one_row(self):
        assert verify_nilpotence(KatalanSpec(RootIdeal.empty(1), (0,), (2,)), 1, 3).holds

    def test_four_rows(self):
        spec = KatalanSpec.make(RootIdeal.from_roots(4, [(1, 3), (1, 4), (2, 4)]), [3, 4, 4], (3, 2, 1, 3))
        assert verify_nilpotence(spec, 2, 5).holds

    def test_below_threshold_rejected(self):
        with pytest.raises(ValueError):
            verify_nilpotence(KatalanSpec(RootIdeal.empty(1), (0,), (2,)), 1, 2)

    def test_threshold_is_sharp_for_g_det(self):
        # one step earlier the result need not vanish
        spec = KatalanSpec(RootIdeal.empty(2), (0, 0), (2, 2))
        assert not expand_katalan(lower_spec(spec, 1, 2 + 2 - 1)).is_zero()

    @pytest.mark.parametrize("spec", random_specs(40, seed=9, gamma_min=0, mult_max=2), ids=str)
    def test_random_minimal(self, spec):
        for z in range(1, spec.ell + 1):
            assert verify_nilpotence(spec, z, spec.gamma[z - 1] + spec.ell - z + 1).holds


class TestDiskCache:
    def test_round_trip(self, tmp_path):
        cache.configure(tmp_path)
        try:
            clear_memo()
            first = closed_kschur((3, 2, 1), 3)
            assert cache.entries()
            clear_memo()
            assert cache.load((3, 2, 1), 3, 3) == first
            assert closed_kschur((3, 2, 1), 3) == first
        finally:
            cache.configure(None)
            clear_memo()

    def test_corrupt_entry_recomputed(self, tmp_path, caplog):
        cache.configure(tmp_path)
        try:
            clear_memo()
            good = closed_kschur((2, 2), 2)
            path = cache.entries()[0]
            path.write_text(path.read_text().replace('"coeff":"1"', '"coeff":"7"', 1))
            clear_memo()
            with caplog.at_level(logging.WARNING):
                assert closed_kschur((2, 2), 2) == good
            assert "checksum" in caplog.text
        finally:
            cache.configure(None)
            clear_memo()
