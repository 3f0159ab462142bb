"""Weight spaces of tensor products of free-negative-part Verma modules.

A tensor monomial is a tuple of N color words, word j representing
f'_{c_1} ... f'_{c_k} |lambda_j>, colors being 1-based simple-root indices.
The enveloping algebra of the free negative part is the free associative
algebra on the f'_i, so words with the same letters in different orders are
distinct basis elements.

The module computes the two kernel spans (Serre insertions and highest-weight
power relations), the e/f actions, and the g-invariant functionals on the
weight-zero space, all over exact rationals.
"""

from fractions import Fraction
from math import comb

from . import linalg


def color_counts(rs, beta):
    counts = [0] * rs.rank
    for c in beta:
        if not 1 <= c <= rs.rank:
            raise ValueError(f"color {c} out of range")
        counts[c - 1] += 1
    return tuple(counts)


def weight_matches(rs, weights, beta):
    """Whether sum(lambda_i) equals the root-lattice content of beta."""
    counts = color_counts(rs, beta)
    total = [Fraction(0)] * rs.rank
    for lam in weights:
        for q, x in enumerate(rs.weight_to_root_basis(lam)):
            total[q] += x
    return all(total[q] == counts[q] for q in range(rs.rank))


def arrangements(counts):
    """Distinct words with the given color multiset, lexicographic order."""
    if all(c == 0 for c in counts):
        yield ()
        return
    for i, c in enumerate(counts):
        if c > 0:
            rest = list(counts)
            rest[i] -= 1
            for tail in arrangements(tuple(rest)):
                yield (i + 1,) + tail


def _sub_multisets(counts):
    if not counts:
        yield ()
        return
    head = counts[0]
    for tail in _sub_multisets(counts[1:]):
        for k in range(head + 1):
            yield (k,) + tail


def distributions(counts, nslots):
    """All nslots-tuples of words whose combined multiset is `counts`."""
    if nslots == 1:
        for w in arrangements(counts):
            yield (w,)
        return
    for sub in _sub_multisets(counts):
        rest = tuple(c - s for c, s in zip(counts, sub))
        for w in arrangements(sub):
            for tail in distributions(rest, nslots - 1):
                yield (w,) + tail


def monomials_with_content(rs, counts, nfactors):
    """Sorted list of tensor monomials with the given color content."""
    return sorted(distributions(tuple(counts), nfactors))


def weight_zero_basis(rs, weights, beta):
    """Basis of the weight-zero space of M'(lambda_1) x ... x M'(lambda_N).

    Empty when sum(lambda_i) differs from the content of beta.
    """
    if not weight_matches(rs, weights, beta):
        return []
    return monomials_with_content(rs, color_counts(rs, beta), len(weights))


# free associative algebra on the f'_i -----------------------------------


def free_mul(x, y):
    out = {}
    for wx, cx in x.items():
        for wy, cy in y.items():
            w = wx + wy
            c = out.get(w, 0) + cx * cy
            if c:
                out[w] = c
            elif w in out:
                del out[w]
    return out


def free_bracket(x, y):
    out = dict(free_mul(x, y))
    for w, c in free_mul(y, x).items():
        c2 = out.get(w, 0) - c
        if c2:
            out[w] = c2
        elif w in out:
            del out[w]
    return out


def serre_element(rs, i, j):
    """theta^-_{ij} = ad(f'_i)^{1-n_ij} f'_j expanded in the free algebra."""
    if i == j:
        raise ValueError("need i != j")
    m = 1 - rs.cartan[i - 1][j - 1]
    return {
        ((i,) * (m - s)) + (j,) + ((i,) * s): (-1) ** s * comb(m, s)
        for s in range(m + 1)
    }


def lower_by_pattern(rs, chain):
    """Root vector f_gamma as a nested bracket along a root pattern.

    `chain` is a dict with "steps" (simple indices, 1-based) as produced by
    roots.root_patterns; partial sums must all be positive roots.
    """
    steps = chain["steps"] if isinstance(chain, dict) else list(chain)
    posset = set(rs.positive_roots)
    partial = [0] * rs.rank
    elem = None
    for s in steps:
        partial[s - 1] += 1
        if tuple(partial) not in posset:
            raise ValueError("chain leaves the positive roots")
        elem = {(s,): 1} if elem is None else free_bracket({(s,): 1}, elem)
    return elem


# actions ------------------------------------------------------------------


def _add(vec, mono, coeff):
    c = vec.get(mono, 0) + coeff
    if c:
        vec[mono] = c
    elif mono in vec:
        del vec[mono]


def apply_free_element(vec, factor, elem):
    """Left-multiply tensor factor `factor` (0-based) by a free-algebra element."""
    out = {}
    for mono, c in vec.items():
        for word, ec in elem.items():
            new = mono[:factor] + (word + mono[factor],) + mono[factor + 1 :]
            _add(out, new, c * ec)
    return out


def apply_word(rs, vec, factor, word):
    return apply_free_element(vec, factor, {tuple(word): 1})


def apply_f(rs, vec, i):
    """f_i acting on the full tensor: sum over factors of prepending f'_i."""
    out = {}
    for mono, c in vec.items():
        for j in range(len(mono)):
            new = mono[:j] + (((i,) + mono[j]),) + mono[j + 1 :]
            _add(out, new, c)
    return out


def apply_e(rs, weights, vec, i):
    """e_i action via [e'_i, f'_j] = delta_ij h_i and the h-eigenvalues.

    Removing the occurrence of f'_i at position s in factor j picks up
    <lambda_j - sum_{u>s} alpha_{c_u}, alpha_i^vee>.
    """
    cartan = rs.cartan
    out = {}
    for mono, c in vec.items():
        for j, word in enumerate(mono):
            lam = weights[j]
            for s, letter in enumerate(word):
                if letter != i:
                    continue
                eig = lam[i - 1] - sum(cartan[i - 1][cu - 1] for cu in word[s + 1 :])
                if eig == 0:
                    continue
                new = mono[:j] + (word[:s] + word[s + 1 :],) + mono[j + 1 :]
                _add(out, new, c * eig)
    return out


# kernel spans -------------------------------------------------------------


def serre_span(rs, weights, beta):
    """Weight-zero vectors carrying one theta^-_{ij} insertion.

    Spans the Serre part of the kernel of M' -> M at weight zero.
    """
    nu = color_counts(rs, beta)
    n = len(weights)
    vectors = []
    for i in range(1, rs.rank + 1):
        for j in range(1, rs.rank + 1):
            if i == j:
                continue
            elem = serre_element(rs, i, j)
            m = 1 - rs.cartan[i - 1][j - 1]
            block = [0] * rs.rank
            block[i - 1] += m
            block[j - 1] += 1
            rest = tuple(a - b for a, b in zip(nu, block))
            if any(x < 0 for x in rest):
                continue
            for jf in range(n):
                # slots: prefix and suffix inside factor jf, then the others
                for dist in distributions(rest, n + 1):
                    prefix, suffix = dist[0], dist[1]
                    others = list(dist[2:])
                    vec = {}
                    for word, ec in elem.items():
                        words = others[:jf] + [prefix + word + suffix] + others[jf:]
                        _add(vec, tuple(words), ec)
                    if vec:
                        vectors.append(vec)
    return vectors


def verma_kernel_span(rs, weights, beta):
    """Weight-zero monomials whose factor-j word ends in f'_i^(1+<lambda_j,a_i^vee>)."""
    nu = color_counts(rs, beta)
    n = len(weights)
    vectors = []
    for jf in range(n):
        lam = weights[jf]
        for i in range(1, rs.rank + 1):
            e = 1 + lam[i - 1]
            rest = list(nu)
            rest[i - 1] -= e
            if rest[i - 1] < 0:
                continue
            block = (i,) * e
            for dist in distributions(tuple(rest), n):
                words = list(dist)
                words[jf] = words[jf] + block
                vectors.append({tuple(words): 1})
    return vectors


def expand_row(vec, index):
    row = [0] * len(index)
    for mono, c in vec.items():
        row[index[mono]] = c
    return row


class TensorFunctional:
    """Element of the weight-zero dual, exact coefficients over the monomial basis."""

    def __init__(self, coeffs, weights, beta):
        self.coeffs = {m: Fraction(c) for m, c in coeffs.items() if c}
        self.weights = tuple(tuple(w) for w in weights)
        self.beta = tuple(beta)

    def pair(self, vec):
        return sum((self.coeffs[m] * c for m, c in vec.items() if m in self.coeffs),
                   Fraction(0))

    def vector(self, basis):
        return [self.coeffs.get(m, Fraction(0)) for m in basis]

    def __eq__(self, other):
        return (self.coeffs, self.weights, self.beta) == (
            other.coeffs, other.weights, other.beta)

    def __repr__(self):
        return f"TensorFunctional({self.coeffs!r})"


def invariant_constraint_rows(rs, weights, beta, basis=None):
    """Rows (over the weight-zero basis) whose nullspace is the invariant dual."""
    if basis is None:
        basis = weight_zero_basis(rs, weights, beta)
    if not basis:
        return [], []
    index = {m: k for k, m in enumerate(basis)}
    nu = color_counts(rs, beta)
    n = len(weights)
    rows = []
    for vec in serre_span(rs, weights, beta):
        rows.append(expand_row(vec, index))
    for vec in verma_kernel_span(rs, weights, beta):
        rows.append(expand_row(vec, index))
    for i in range(1, rs.rank + 1):
        down = list(nu)
        down[i - 1] -= 1
        if down[i - 1] >= 0:
            for mono in monomials_with_content(rs, down, n):
                rows.append(expand_row(apply_f(rs, {mono: 1}, i), index))
        up = list(nu)
        up[i - 1] += 1
        for mono in monomials_with_content(rs, up, n):
            vec = apply_e(rs, weights, {mono: 1}, i)
            if vec:
                rows.append(expand_row(vec, index))
    return rows, basis


def invariant_functionals(rs, weights, beta):
    """Basis of functionals vanishing on both kernel spans and g-invariant.

    Deterministic: reduced echelon over the lexicographic monomial order.
    """
    rows, basis = invariant_constraint_rows(rs, weights, beta)
    if not basis:
        return []
    if not rows:
        vecs = linalg.nullspace([[0] * len(basis)], len(basis))
    else:
        vecs = linalg.nullspace(rows, len(basis))
    return [
        TensorFunctional({m: v[k] for k, m in enumerate(basis)}, weights, beta)
        for v in vecs
    ]
