"""Master-function exponents, observation checks, the admissible subspace."""

from fractions import Fraction

import pytest

from cblocks import linalg
from cblocks.admissible import (MasterData, admissible_subspace,
                                control_poles_check, jet_cutoff,
                                min_even_constant, observation_check,
                                r_degree_on_stratum, stratum_catalog)
from cblocks.blocks import BlockInstance, conformal_blocks
from cblocks.logforms import sv_map
from cblocks.ratfun import RationalForm, SparsePoly, Stratum
from cblocks.repspace import TensorFunctional, weight_zero_basis
from cblocks.roots import build_root_system

SL2 = build_root_system("A", 1)
SL3 = build_root_system("A", 2)
G2 = build_root_system("G2", 2)


def spans_match(instance, beta, **kw):
    space = conformal_blocks(instance, beta)
    md = MasterData(instance, beta)
    adm = admissible_subspace(md, **kw)
    basis = space.monomials
    if not basis:
        return space.dim == 0 and not adm
    rows_b = [f.vector(basis) for f in space.basis]
    rows_a = [f.vector(basis) for f in adm]
    return space.dim == len(adm) and linalg.spans_equal(rows_b, rows_a, len(basis))


def test_min_even_constant():
    inst = BlockInstance(SL2, 1, [(1,), (1,)], [0, 1])
    assert min_even_constant(inst, [1]) == 2
    inst = BlockInstance(SL2, 2, [(2,), (2,)], [0, 1])
    assert min_even_constant(inst, [1, 1]) == 1  # root-lattice weights, simply laced
    inst = BlockInstance(G2, 1, [(1, 0), (0, 0)], [0, 1])
    assert min_even_constant(inst, [1, 1, 2]) % 3 == 0


def test_master_data_validates_constant():
    inst = BlockInstance(SL2, 1, [(1,), (1,)], [0, 1])
    md = MasterData(inst, [1])
    assert md.C == 2 and md.kappa == 3
    with pytest.raises(ValueError):
        MasterData(inst, [1], C=1)


def test_r_degree_examples():
    inst = BlockInstance(SL2, 1, [(1,), (1,)], [0, 1])
    md = MasterData(inst, [1])
    assert r_degree_on_stratum(md, Stratum("S2", (1,), 1)) == Fraction(1, 3)
    inst = BlockInstance(SL2, 1, [(1,), (1,), (1,), (1,)], [0, 1, 3, 7])
    md = MasterData(inst, [1, 1])
    assert r_degree_on_stratum(md, Stratum("S1", (1, 2))) == Fraction(-2, 3)
    # infinity: -(gamma,gamma)/2k - sum (b,b)/2k with gamma = alpha
    assert r_degree_on_stratum(md, Stratum("SINF", (1,))) == Fraction(-2, 3)


def test_stratum_catalog_pruning():
    inst = BlockInstance(SL2, 2, [(2,)] * 4, [0, 1, 3, 7])
    md = MasterData(inst, [1, 1, 1, 1])
    pruned = stratum_catalog(md)
    full = stratum_catalog(md, prune_by_color=False)
    assert len(pruned) < len(full)
    # same-color S1 subsets of one size collapse to a single representative
    assert sum(1 for s in pruned if s.kind == "S1") == 3


def test_jet_cutoff_signs():
    inst = BlockInstance(SL2, 1, [(1,), (1,)], [0, 1])
    md = MasterData(inst, [1])
    # single variable at a weight-w point: no constraint (simple pole allowed)
    assert jet_cutoff(md, Stratum("S2", (1,), 1)) < 0
    # infinity: constraints exist
    assert jet_cutoff(md, Stratum("SINF", (1,))) >= 0


@pytest.mark.parametrize("k,cs", [
    (1, [1, 1]), (1, [1, 1, 0]), (1, [1, 1, 1, 1]),
    (2, [2, 2]), (2, [2, 0]), (2, [1, 1, 2]), (2, [2, 2, 2, 0]),
])
def test_theorem_equality_sl2(k, cs):
    pts = [0, 1, 3, 7][: len(cs)]
    inst = BlockInstance(SL2, k, [(c,) for c in cs], pts)
    assert spans_match(inst, [1] * (sum(cs) // 2))


def test_theorem_equality_sl3_g2():
    inst = BlockInstance(SL3, 1, [(1, 0), (0, 1)], [0, 1])
    assert spans_match(inst, [1, 2])
    inst = BlockInstance(SL3, 1, [(1, 0)] * 3, [0, 1, 3])
    assert spans_match(inst, [1, 1, 2])
    inst = BlockInstance(G2, 1, [(1, 0), (0, 0)], [0, 1])
    assert spans_match(inst, [1, 1, 2])


def test_mu_not_in_lattice_dim_zero():
    inst = BlockInstance(SL2, 1, [(1,), (0,)], [0, 1])
    md = MasterData(inst, [1])
    assert admissible_subspace(md) == []


def test_admissible_z_rescale_invariance():
    inst = BlockInstance(SL2, 1, [(1,), (1,), (0,)], [0, 1, 3])
    md = MasterData(inst, [1])
    d1 = len(admissible_subspace(md))
    scaled = BlockInstance(SL2, 1, inst.weights, [0, 7, 21])
    d2 = len(admissible_subspace(MasterData(scaled, [1])))
    assert d1 == d2 == 1


def test_observation_on_block_functional():
    inst = BlockInstance(SL2, 1, [(1,)] * 4, [0, 1, 3, 7])
    beta = [1, 1]
    md = MasterData(inst, beta)
    space = conformal_blocks(inst, beta)
    form = sv_map(space.basis[0], beta, inst.points)
    assert observation_check(form, md) == []


def test_observation_violations():
    inst = BlockInstance(SL2, 1, [(1,)] * 4, [0, 1, 3, 7])
    md = MasterData(inst, [1, 1])
    doubled = RationalForm(2, (1, 2), SparsePoly.const(2, 1),
                           {("tz", 1, 1): 2, ("tz", 2, 2): 1}, inst.points)
    kinds = {v[0] for v in observation_check(doubled, md)}
    assert "point-order" in kinds
    same_color_pole = RationalForm(2, (1, 2), SparsePoly.const(2, 1),
                                   {("tt", 1, 2): 1, ("tz", 1, 1): 1,
                                    ("tz", 2, 2): 1}, inst.points)
    kinds = {v[0] for v in observation_check(same_color_pole, md)}
    assert "nonneg-color-pole" in kinds


def test_control_poles():
    inst = BlockInstance(SL2, 1, [(1,)] * 4, [0, 1, 3, 7])
    beta = [1, 1]
    md = MasterData(inst, beta)
    psi = conformal_blocks(inst, beta).basis[0]
    # same-color pair: 2 alpha is not a root, the residue must vanish
    rep = control_poles_check(psi, md, [1, 2])
    assert rep["nonzero"] is False

    inst3 = BlockInstance(SL3, 1, [(1, 0), (0, 1)], [0, 1])
    md3 = MasterData(inst3, [1, 2])
    psi3 = conformal_blocks(inst3, [1, 2]).basis[0]
    rep = control_poles_check(psi3, md3, [1, 2])
    assert rep["nonzero"] and rep["ok"]


def test_control_poles_g2_pattern():
    # along the unique G2 pattern the color sums stay positive roots
    inst = BlockInstance(G2, 1, [(1, 0), (0, 0)], [0, 1])
    beta = [1, 1, 2]
    md = MasterData(inst, beta)
    basis = weight_zero_basis(G2, inst.weights, beta)
    psi = TensorFunctional({m: Fraction(i + 1) for i, m in enumerate(basis)},
                           inst.weights, beta)
    # T = (alpha1, alpha2)-colored pair: sum is the root alpha1+alpha2
    rep = control_poles_check(psi, md, [1, 3])
    if rep["nonzero"]:
        assert rep["color_sum_positive_root"]
    # T = same-color alpha1 pair: 2 alpha1 is not a root
    rep = control_poles_check(psi, md, [1, 2])
    if rep["nonzero"]:
        assert not rep["color_sum_positive_root"]


def test_blocks_contained_in_admissible():
    inst = BlockInstance(SL2, 2, [(2,), (1,), (1,)], [0, 1, 3])
    beta = [1, 1]
    md = MasterData(inst, beta)
    space = conformal_blocks(inst, beta)
    adm = admissible_subspace(md)
    basis = space.monomials
    adm_rows = [f.vector(basis) for f in adm]
    for f in space.basis:
        assert linalg.span_contains(adm_rows, f.vector(basis), len(basis))


def test_s2_reduction_shadow():
    # the pairwise-sum bound forces d^{S'}(Res_T Omega) > -1 with S' the residual
    # point stratum, on computed block forms
    from cblocks.ratfun import iterated_residue, log_degree

    inst = BlockInstance(SL3, 1, [(1, 0), (1, 0), (1, 0)], [0, 1, 3])
    beta = [1, 1, 2]
    psi = conformal_blocks(inst, beta).basis[0]
    form = sv_map(psi, beta, inst.points)
    for T in [(1, 3), (2, 3)]:  # alpha1 + alpha2 colored pairs
        res = iterated_residue(form, list(T))
        if res.is_zero():
            continue
        m = min(T)
        for j in range(1, 4):
            assert log_degree(res, Stratum("S2", (m,), j)) > -1


def test_engine_agrees_with_direct_log_degrees():
    # independent cross-check: an admissible functional must have
    # d^S(Omega) + r(S) > 0 for every stratum when computed the direct way
    # (valuation of the materialized numerator), and conversely a functional
    # outside the space must violate some stratum
    from cblocks.ratfun import log_degree

    inst = BlockInstance(SL2, 1, [(1,)] * 4, [0, 1, 3, 7])
    beta = [1, 1]
    md = MasterData(inst, beta)
    adm = admissible_subspace(md)
    assert len(adm) == 1
    catalog = stratum_catalog(md, prune_by_color=False)

    def strict_positive_everywhere(psi):
        form = sv_map(psi, beta, inst.points)
        if form.is_zero():
            return True
        for s in catalog:
            d = log_degree(form, s)
            if d + r_degree_on_stratum(md, s) <= 0:
                return False
        return True

    assert strict_positive_everywhere(adm[0])
    basis = weight_zero_basis(SL2, inst.weights, beta)
    adm_vec = adm[0].vector(basis)
    violators = 0
    for i, mono in enumerate(basis):
        probe = TensorFunctional({mono: 1}, inst.weights, beta)
        if [Fraction(int(j == i)) for j in range(len(basis))] == adm_vec:
            continue
        if not strict_positive_everywhere(probe):
            violators += 1
    assert violators >= len(basis) - 1


def test_residue_pole_profile_on_blocks():
    # iterated residues of computed block forms keep at most simple poles
    # toward the remaining variables and the marked points
    inst = BlockInstance(SL3, 1, [(1, 0), (1, 0), (1, 0)], [0, 1, 3])
    beta = [1, 1, 2]
    md = MasterData(inst, beta)
    psi = conformal_blocks(inst, beta).basis[0]
    from itertools import combinations

    for size in (2, 3):
        for T in combinations(range(1, 4), size):
            rep = control_poles_check(psi, md, list(T))
            if rep["nonzero"]:
                assert rep["color_sum_positive_root"]
                assert rep["simple_toward_variables"]
                assert rep["simple_toward_points"]
