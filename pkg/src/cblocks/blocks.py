"""Genus-0 conformal block spaces via the algebraic T^{k+1} criterion.

A block space is cut out of the g-invariant weight-zero functionals by the
extra conditions <Psi| T^{k+1} |v> = 0, where T = sum_i z_i f_theta^(i) and
v runs over the tensor monomials whose color content is mu - (k+1)theta.
When that content is not zero or a nonnegative combination of simple roots
the extra condition is vacuous.
"""

from fractions import Fraction

from . import linalg, repspace
from .roots import level, root_patterns


class InstanceError(ValueError):
    """Invalid level/weight/point data for a block computation."""


class BlockInstance:
    """One problem instance: algebra, level, weights, marked points."""

    def __init__(self, rs, k, weights, points):
        if k < 0:
            raise InstanceError("level must be nonnegative")
        self.rs = rs
        self.k = k
        self.weights = tuple(tuple(w) for w in weights)
        self.points = tuple(Fraction(p) for p in points)
        if len(self.points) != len(self.weights):
            raise InstanceError("need one point per weight")
        if len(set(self.points)) != len(self.points):
            raise InstanceError("points must be pairwise distinct")
        for w in self.weights:
            if len(w) != rs.rank:
                raise InstanceError("weight rank mismatch")
            if level(rs, w) > k:
                raise InstanceError(f"weight {w} exceeds level {k}")

    @property
    def npoints(self):
        return len(self.points)

    def with_points(self, points):
        return BlockInstance(self.rs, self.k, self.weights, points)


class BlockSpace:
    def __init__(self, basis, monomials):
        self.basis = list(basis)
        self.monomials = list(monomials)
        self.dim = len(self.basis)

    def coefficient_rows(self):
        return [f.vector(self.monomials) for f in self.basis]


def theta_pattern(rs):
    """The canonical root pattern from alpha_1 up to the highest root."""
    for pat in root_patterns(rs, 1):
        if tuple(pat["roots"][-1]) == rs.highest_root:
            return pat
    raise AssertionError("no pattern from alpha_1 reaches theta")


def f_theta_element(rs):
    return repspace.lower_by_pattern(rs, theta_pattern(rs))


def t_operator(instance, scale=1):
    """T = sum_i z_i f_theta^(i) acting on tensor vectors (dict monomial->coeff)."""
    elem = f_theta_element(instance.rs)
    if scale != 1:
        elem = {w: scale * c for w, c in elem.items()}
    points = instance.points

    def apply(vec):
        out = {}
        for i, z in enumerate(points):
            if z == 0:
                continue
            for mono, c in repspace.apply_free_element(vec, i, elem).items():
                cc = out.get(mono, 0) + z * c
                if cc:
                    out[mono] = cc
                elif mono in out:
                    del out[mono]
        return out

    return apply


def t_condition_content(instance, beta):
    """Color content mu - (k+1)theta, or None when the condition is vacuous."""
    rs = instance.rs
    nu = repspace.color_counts(rs, beta)
    theta = rs.highest_root
    target = tuple(nu[q] - (instance.k + 1) * theta[q] for q in range(rs.rank))
    if any(t < 0 for t in target):
        return None
    return target


def conformal_blocks(instance, beta, f_theta_scale=1):
    """Block space: invariant functionals annihilating the image of T^{k+1}."""
    rs = instance.rs
    if not repspace.weight_matches(rs, instance.weights, beta):
        return BlockSpace([], [])
    basis = repspace.weight_zero_basis(rs, instance.weights, beta)
    invariants = repspace.invariant_functionals(rs, instance.weights, beta)
    if not invariants:
        return BlockSpace([], basis)
    target = t_condition_content(instance, beta)
    if target is None:
        return BlockSpace(invariants, basis)
    T = t_operator(instance, scale=f_theta_scale)
    power = instance.k + 1
    inv_vecs = [f.vector(basis) for f in invariants]
    index = {m: i for i, m in enumerate(basis)}
    rows = []
    for w in repspace.monomials_with_content(rs, target, instance.npoints):
        vec = {w: 1}
        for _ in range(power):
            vec = T(vec)
        if not vec:
            continue
        image = repspace.expand_row(vec, index)
        rows.append([
            sum(iv[j] * image[j] for j in range(len(basis)) if image[j])
            for iv in inv_vecs
        ])
    if not rows:
        return BlockSpace(invariants, basis)
    combos = linalg.nullspace(rows, len(invariants))
    out = []
    for y in combos:
        coeffs = {}
        for l, f in enumerate(invariants):
            if y[l] == 0:
                continue
            for m, c in f.coeffs.items():
                coeffs[m] = coeffs.get(m, Fraction(0)) + y[l] * c
        out.append(repspace.TensorFunctional(coeffs, instance.weights, beta))
    return BlockSpace(out, basis)


def vacuum_propagation_check(instance, beta, fresh_point=None):
    """dim is unchanged by appending the vacuum weight at a fresh point."""
    rs = instance.rs
    if fresh_point is None:
        fresh_point = max(instance.points) + 11
    extended = BlockInstance(
        rs,
        instance.k,
        list(instance.weights) + [(0,) * rs.rank],
        list(instance.points) + [fresh_point],
    )
    return conformal_blocks(extended, beta).dim == conformal_blocks(instance, beta).dim


def z_independence_check(instance, beta, alt_points):
    """Equal dimensions at two generic point configurations."""
    alt = instance.with_points(alt_points)
    return conformal_blocks(instance, beta).dim == conformal_blocks(alt, beta).dim
