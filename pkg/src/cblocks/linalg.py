"""Exact rational linear algebra over fractions.Fraction.

Everything here works on plain lists of numbers (int or Fraction mix freely)
and is deterministic: given the same rows in the same order, echelon forms,
ranks and nullspace bases are byte-identical.
"""

from fractions import Fraction


def rref(rows):
    """Reduced row echelon form.

    Returns (reduced_rows, pivot_columns). Zero rows are dropped, pivots are
    normalized to 1 and cleared above and below.
    """
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][c]
        if pv != 1:
            inv = Fraction(1, 1) / pv
            mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows):
    return len(rref(rows)[0])


def nullspace(rows, ncols):
    """Basis of {x : A x = 0}, one vector per free column of the RREF.

    The basis is deterministic: free columns in increasing order, the free
    coordinate set to 1.
    """
    red, pivots = rref(rows)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, pc in zip(red, pivots):
            v[pc] = -r[free]
        basis.append(v)
    return basis


class Echelon:
    """Incremental row-space echelon, for streaming large constraint sets.

    Rows are reduced against the current echelon as they arrive; dependent
    rows are discarded.  `pivots` maps pivot column -> stored row.
    """

    def __init__(self, ncols):
        self.ncols = ncols
        self.pivots = {}

    def add(self, row):
        """Reduce `row` and absorb it. Returns True if it increased the rank."""
        row = list(row)
        for c in sorted(self.pivots):
            if row[c] != 0:
                f = row[c]
                stored = self.pivots[c]
                row = [a - f * b for a, b in zip(row, stored)]
        for c in range(self.ncols):
            if row[c] != 0:
                inv = Fraction(1, 1) / row[c]
                self.pivots[c] = [x * inv for x in row]
                return True
        return False

    @property
    def rank(self):
        return len(self.pivots)

    def rows(self):
        return [self.pivots[c] for c in sorted(self.pivots)]

    def nullspace(self):
        return nullspace(self.rows(), self.ncols)


def row_space_canonical(rows, ncols):
    """RREF rows as tuples; equal spans give equal canonical forms."""
    if not rows:
        return ()
    red, _ = rref(rows)
    return tuple(tuple(Fraction(x) for x in r) for r in red)


def spans_equal(rows_a, rows_b, ncols):
    return row_space_canonical(rows_a, ncols) == row_space_canonical(rows_b, ncols)


def span_contains(rows, vector, ncols):
    """Whether `vector` lies in the row span of `rows`."""
    base = rank(rows) if rows else 0
    return rank(list(rows) + [list(vector)]) == base


MOD_PRIME = (1 << 31) - 1


def rank_mod_p(rows_iter, ncols, p=MOD_PRIME):
    """Rank of a rational matrix reduced mod p, consumed as a stream.

    Row entries may be int or Fraction; a Fraction whose denominator is
    divisible by p is rejected (cannot happen for the sizes used here, but
    guard anyway).  rank_mod_p <= rank_Q always, so full column rank mod p
    certifies a zero rational nullspace exactly.
    """
    pivots = {}
    for raw in rows_iter:
        row = [0] * ncols
        for j, x in enumerate(raw):
            if isinstance(x, Fraction):
                den = x.denominator % p
                if den == 0:
                    raise ArithmeticError("denominator divisible by modulus")
                row[j] = (x.numerator % p) * pow(den, p - 2, p) % p
            else:
                row[j] = x % p
        for c in sorted(pivots):
            if row[c]:
                f = row[c]
                stored = pivots[c]
                row = [(a - f * b) % p for a, b in zip(row, stored)]
        for c in range(ncols):
            if row[c]:
                inv = pow(row[c], p - 2, p)
                pivots[c] = [x * inv % p for x in row]
                break
        if len(pivots) == ncols:
            return ncols
    return len(pivots)
