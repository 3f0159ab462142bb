"""Root systems for A_n, B_n, C_n, D_n and G2 with the normalized Killing form.

Roots are integer vectors in the simple-root basis, weights are nonnegative
integer vectors in the fundamental-weight basis.  The form is normalized so
that (theta, theta) = 2 for the highest root theta; with that normalization
level(lambda) = (lambda, theta) and the dual Coxeter number is
1 + sum of comarks.  Everything is exact (Fraction) and immutable after
construction.
"""

from fractions import Fraction

FAMILIES = ("A", "B", "C", "D", "G2")

# (alpha_i, alpha_i) values per family, normalized to (theta, theta) = 2.
# Off-diagonal values follow the connected Dynkin diagram; see _gram below.


def _gram_matrix(family, rank):
    g = [[Fraction(0) for _ in range(rank)] for _ in range(rank)]
    if family == "A":
        for i in range(rank):
            g[i][i] = Fraction(2)
        for i in range(rank - 1):
            g[i][i + 1] = g[i + 1][i] = Fraction(-1)
    elif family == "B":
        # alpha_n short: (alpha_n, alpha_n) = 1, the rest long.
        for i in range(rank):
            g[i][i] = Fraction(2) if i < rank - 1 else Fraction(1)
        for i in range(rank - 1):
            g[i][i + 1] = g[i + 1][i] = Fraction(-1)
    elif family == "C":
        # alpha_n long: (alpha_n, alpha_n) = 2, the rest short of length 1.
        for i in range(rank):
            g[i][i] = Fraction(1) if i < rank - 1 else Fraction(2)
        for i in range(rank - 2):
            g[i][i + 1] = g[i + 1][i] = Fraction(-1, 2)
        g[rank - 2][rank - 1] = g[rank - 1][rank - 2] = Fraction(-1)
    elif family == "D":
        for i in range(rank):
            g[i][i] = Fraction(2)
        for i in range(rank - 2):
            g[i][i + 1] = g[i + 1][i] = Fraction(-1)
        g[rank - 3][rank - 1] = g[rank - 1][rank - 3] = Fraction(-1)
    elif family == "G2":
        g[0][0] = Fraction(2, 3)
        g[0][1] = g[1][0] = Fraction(-1)
        g[1][1] = Fraction(2)
    return g


class RootSystem:
    """Immutable root-system data for one family/rank.

    Attributes: family, rank, gram (Killing form on simple roots),
    positive_roots (integer tuples, simple-root basis), highest_root,
    dual_coxeter, cartan (n_ij = 2(a_i,a_j)/(a_i,a_i)).
    """

    def __init__(self, family, rank):
        if family not in FAMILIES:
            raise ValueError(f"unsupported family {family!r}")
        if family == "G2":
            if rank != 2:
                raise ValueError("G2 has rank 2")
        elif family == "A":
            if rank < 1:
                raise ValueError("A_n needs rank >= 1")
        elif family in ("B", "C"):
            if rank < 2:
                raise ValueError(f"{family}_n needs rank >= 2")
        elif family == "D":
            if rank < 3:
                raise ValueError("D_n needs rank >= 3")
        self.family = family
        self.rank = rank
        self.gram = _gram_matrix(family, rank)
        self.cartan = [
            [_as_int(2 * self.gram[i][j] / self.gram[i][i]) for j in range(rank)]
            for i in range(rank)
        ]
        self.simple_roots = [
            tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)
        ]
        self.positive_roots = self._close_positive_roots()
        self.highest_root = max(self.positive_roots, key=lambda r: (sum(r), r))
        if self.killing(self.highest_root, self.highest_root) != 2:
            raise AssertionError("normalization broken: (theta,theta) != 2")
        self.dual_coxeter = self._dual_coxeter()

    def __repr__(self):
        name = self.family if self.family == "G2" else f"{self.family}{self.rank}"
        return f"RootSystem({name})"

    def _close_positive_roots(self):
        """Enumerate positive roots by root strings from the simple roots.

        gamma + alpha_i is a root iff p - <gamma, alpha_i^vee> >= 1 where p is
        the largest m with gamma - m*alpha_i a positive root (or gamma itself
        simple, p = 0 unless the string descends).
        """
        roots = set(self.simple_roots)
        frontier = set(self.simple_roots)
        while frontier:
            nxt = set()
            for gamma in frontier:
                for i in range(self.rank):
                    if gamma == self.simple_roots[i]:
                        continue  # 2*alpha_i is never a root
                    # p = depth of the alpha_i string below gamma; stays among
                    # positive roots since gamma has support off i.
                    p = 0
                    down = list(gamma)
                    while True:
                        down[i] -= 1
                        if any(c < 0 for c in down) or tuple(down) not in roots:
                            break
                        p += 1
                    pairing = sum(self.cartan[i][j] * gamma[j] for j in range(self.rank))
                    if p - pairing >= 1:
                        up = list(gamma)
                        up[i] += 1
                        cand = tuple(up)
                        if cand not in roots:
                            roots.add(cand)
                            nxt.add(cand)
            frontier = nxt
        return sorted(roots, key=lambda r: (sum(r), r))

    def _dual_coxeter(self):
        theta = self.highest_root
        comarks = sum(
            Fraction(theta[i]) * self.gram[i][i] / 2 for i in range(self.rank)
        )
        return 1 + _as_int(comarks)

    # pairings ---------------------------------------------------------

    def killing(self, v, w):
        """Killing form on root-lattice vectors (simple-root basis, rational ok)."""
        if len(v) != self.rank or len(w) != self.rank:
            raise ValueError("dimension mismatch")
        total = Fraction(0)
        for i in range(self.rank):
            if v[i] == 0:
                continue
            for j in range(self.rank):
                if w[j] != 0:
                    total += Fraction(v[i]) * self.gram[i][j] * Fraction(w[j])
        return total

    def weight_root_pairing(self, lam, v):
        """(lambda, v) for lambda in the fundamental-weight basis, v in the root basis.

        Uses (omega_p, alpha_q) = delta_pq (alpha_q, alpha_q)/2; no gram inverse needed.
        """
        return sum(
            Fraction(lam[q]) * Fraction(v[q]) * self.gram[q][q] / 2
            for q in range(self.rank)
        )

    def weight_weight_pairing(self, lam, mu):
        """(lambda, mu) for two weights in the fundamental-weight basis."""
        W = self._fundamental_in_root_basis()
        mu_alpha = [
            sum(Fraction(mu[p]) * W[p][q] for p in range(self.rank))
            for q in range(self.rank)
        ]
        return self.weight_root_pairing(lam, mu_alpha)

    def _fundamental_in_root_basis(self):
        if not hasattr(self, "_fund_cache"):
            n = self.rank
            inv = _invert(self.gram)
            self._fund_cache = [
                [inv[p][q] * self.gram[p][p] / 2 for q in range(n)] for p in range(n)
            ]
            # row p solves w_p . gram = e_p * (a_p,a_p)/2, i.e. (omega_p, alpha_q) as required
        return self._fund_cache

    def weight_to_root_basis(self, lam):
        W = self._fundamental_in_root_basis()
        return tuple(
            sum(Fraction(lam[p]) * W[p][q] for p in range(self.rank))
            for q in range(self.rank)
        )

    def coroot_pairing(self, lam, i):
        """<lambda, alpha_i^vee> = 2(lambda,alpha_i)/(alpha_i,alpha_i) = lam[i]."""
        return lam[i]


def _as_int(x):
    f = Fraction(x)
    if f.denominator != 1:
        raise AssertionError(f"expected integer, got {f}")
    return int(f)


def _invert(m):
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for c in range(n):
        pr = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[pr] = aug[pr], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def build_root_system(family, rank):
    """Construct and validate the root system for one of A, B, C, D, G2."""
    return RootSystem(family, rank)


def parse_algebra(name):
    """Parse a selector string like "A3", "B2", "G2" into a RootSystem."""
    name = name.strip()
    if name == "G2":
        return build_root_system("G2", 2)
    fam, num = name[0].upper(), name[1:]
    if fam not in ("A", "B", "C", "D") or not num.isdigit():
        raise ValueError(f"bad algebra selector {name!r}")
    return build_root_system(fam, int(num))


def killing(rs, v, w):
    return rs.killing(v, w)


def level(rs, lam):
    """(lambda, theta); membership in P_k is level <= k."""
    if any(c < 0 for c in lam):
        raise ValueError("weight not dominant")
    return _as_int(rs.weight_root_pairing(lam, rs.highest_root))


def dual_coxeter(rs):
    return rs.dual_coxeter


def is_positive_root(rs, v):
    return tuple(v) in set(rs.positive_roots)


def root_patterns(rs, start):
    """Maximal chains of positive roots starting at alpha_start (1-based index).

    Each step adds one simple root and stays inside the positive roots.
    """
    if not 1 <= start <= rs.rank:
        raise ValueError("start must index a simple root")
    posset = set(rs.positive_roots)
    first = rs.simple_roots[start - 1]
    patterns = []

    def extend(chain, steps):
        cur = chain[-1]
        grown = False
        for i in range(rs.rank):
            cand = tuple(c + int(i == j) for j, c in enumerate(cur))
            if cand in posset:
                grown = True
                extend(chain + [cand], steps + [i + 1])
        if not grown:
            patterns.append((tuple(chain), tuple(steps)))

    extend([first], [start])
    patterns.sort()
    return [{"roots": list(r), "steps": list(s)} for r, s in patterns]


def check_pairwise_sums(rs):
    """Pairwise-sum inequality over simple-root decompositions of positive roots.

    For gamma = sum of simple roots delta_i (with multiplicity, determined by
    the coefficients of gamma), verifies sum_{i<j} (delta_i, delta_j) > -g*.
    Returns a report with the minimum margin over all positive roots.
    """
    gstar = rs.dual_coxeter
    entries = []
    for gamma in rs.positive_roots:
        pair_sum = (
            rs.killing(gamma, gamma)
            - sum(Fraction(c) * rs.gram[i][i] for i, c in enumerate(gamma))
        ) / 2
        entries.append(
            {
                "root": gamma,
                "pair_sum": pair_sum,
                "bound": -gstar,
                "margin": pair_sum + gstar,
                "ok": pair_sum > -gstar,
            }
        )
    min_margin = min(e["margin"] for e in entries)
    return {
        "all_ok": all(e["ok"] for e in entries),
        "min_margin": min_margin,
        "entries": entries,
    }
