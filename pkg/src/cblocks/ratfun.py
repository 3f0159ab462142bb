"""Exact calculus of top-degree meromorphic forms with structured denominators.

Forms are N/D * dt_{v1} ^ ... ^ dt_{vm} with N a sparse polynomial in the
t-variables (marked points z_j are exact rational constants) and D a multiset
of linear factors of the two shapes (t_a - t_b), a < b, and (t_a - z_j).
The wedge is always stored in ascending variable order.

Sign convention: a residue extracts against f = t_larger - t_smaller
(diagonals) or f = t_a - z_j (points) with a constant sign, i.e.
Res(N/((t_hi - t_lo) D)) = -(N/D)| and Res(N/((t_a - z_j) D)) = +(N/D)|.
The constant (position-independent) sign is what makes disjoint iterated
residues commute exactly; a wedge-position sign would make them alternate.
"""

from fractions import Fraction


class ResidueError(ValueError):
    """Higher-order pole where a simple one is required."""


# sparse polynomials --------------------------------------------------------


class SparsePoly:
    """Sparse polynomial: exponent tuple -> nonzero coefficient (int/Fraction)."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[tuple(e)] = c

    @classmethod
    def const(cls, nvars, c):
        p = cls(nvars)
        if c:
            p.terms[(0,) * nvars] = c
        return p

    @classmethod
    def variable(cls, nvars, a):
        e = [0] * nvars
        e[a - 1] = 1
        return cls(nvars, {tuple(e): 1})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return self.nvars == other.nvars and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return SparsePoly(self.nvars, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return SparsePoly(self.nvars, out)

    def scale(self, c):
        if c == 0:
            return SparsePoly(self.nvars)
        return SparsePoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def degree_in(self, a):
        if not self.terms:
            return -1
        return max(e[a - 1] for e in self.terms)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def substitute_const(self, a, value):
        """t_a := value (exact rational)."""
        out = SparsePoly(self.nvars)
        for e, c in self.terms.items():
            k = e[a - 1]
            ee = list(e)
            ee[a - 1] = 0
            coeff = c * (Fraction(value) ** k if k else 1)
            cur = out.terms.get(tuple(ee), 0) + coeff
            if cur:
                out.terms[tuple(ee)] = cur
            elif tuple(ee) in out.terms:
                del out.terms[tuple(ee)]
        return out

    def substitute_var(self, a, b):
        """t_a := t_b."""
        out = SparsePoly(self.nvars)
        for e, c in self.terms.items():
            k = e[a - 1]
            ee = list(e)
            ee[a - 1] = 0
            ee[b - 1] += k
            key = tuple(ee)
            cur = out.terms.get(key, 0) + c
            if cur:
                out.terms[key] = cur
            elif key in out.terms:
                del out.terms[key]
        return out

    def substitute_poly(self, a, repl):
        """t_a := repl (a SparsePoly of the same width)."""
        by_power = {}
        for e, c in self.terms.items():
            k = e[a - 1]
            ee = list(e)
            ee[a - 1] = 0
            by_power.setdefault(k, {})[tuple(ee)] = c
        out = SparsePoly(self.nvars)
        power = SparsePoly.const(self.nvars, 1)
        for k in range(0, max(by_power) + 1 if by_power else 0):
            if k in by_power:
                out = out + SparsePoly(self.nvars, by_power[k]) * power
            power = power * repl
        return out

    def coefficients_in(self, a):
        """Dict power of t_a -> SparsePoly in the remaining slots."""
        by_power = {}
        for e, c in self.terms.items():
            k = e[a - 1]
            ee = list(e)
            ee[a - 1] = 0
            by_power.setdefault(k, {})[tuple(ee)] = c
        return {k: SparsePoly(self.nvars, d) for k, d in by_power.items()}

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"t{i+1}^{k}" for i, k in enumerate(e) if k)
            bits.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(bits)


def divmod_linear(p, a, c_var=None, c_const=None):
    """Synthetic division of p by (t_a - c), c a variable or a constant.

    Returns (quotient, remainder); remainder is p with t_a := c.
    """
    coeffs = p.coefficients_in(a)
    if not coeffs:
        return SparsePoly(p.nvars), SparsePoly(p.nvars)
    deg = max(coeffs)
    zero = SparsePoly(p.nvars)
    q = {}
    carry = zero
    for k in range(deg, -1, -1):
        cur = coeffs.get(k, zero) + carry
        if k == 0:
            rem = cur
            break
        q[k - 1] = cur
        if c_var is not None:
            carry = cur * SparsePoly.variable(p.nvars, c_var)
        else:
            carry = cur.scale(Fraction(c_const))
    quot = zero
    for k, poly in q.items():
        shift = SparsePoly(
            p.nvars,
            {
                tuple(
                    e[i] + (k if i == a - 1 else 0) for i in range(p.nvars)
                ): c
                for e, c in poly.terms.items()
            },
        )
        quot = quot + shift
    return quot, rem


# linear factors -------------------------------------------------------------


def canonical_tt(x, y):
    """(t_x - t_y) as (factor, sign) with ascending indices."""
    if x == y:
        raise ValueError("degenerate factor")
    if x < y:
        return ("tt", x, y), 1
    return ("tt", y, x), -1


def factor_poly(factor, nvars, points):
    kind = factor[0]
    if kind == "tt":
        _, a, b = factor
        return SparsePoly.variable(nvars, a) - SparsePoly.variable(nvars, b)
    _, a, j = factor
    return SparsePoly.variable(nvars, a) - SparsePoly.const(nvars, Fraction(points[j - 1]))


class Stratum:
    """Coincidence pattern: S1 mutual collapse, S2 collapse to z_j, SINF escape."""

    __slots__ = ("kind", "subset", "point")

    def __init__(self, kind, subset, point=None):
        if kind not in ("S1", "S2", "SINF"):
            raise ValueError(f"bad stratum kind {kind}")
        subset = tuple(sorted(subset))
        if kind == "S1" and len(subset) < 2:
            raise ValueError("S1 needs at least two variables")
        if kind in ("S2", "SINF") and len(subset) < 1:
            raise ValueError("stratum needs a variable")
        if (kind == "S2") != (point is not None):
            raise ValueError("point index exactly for S2")
        self.kind = kind
        self.subset = subset
        self.point = point

    def __repr__(self):
        if self.kind == "S2":
            return f"Stratum(S2, {self.subset}, z{self.point})"
        return f"Stratum({self.kind}, {self.subset})"

    def __eq__(self, other):
        return (self.kind, self.subset, self.point) == (
            other.kind, other.subset, other.point)

    def __hash__(self):
        return hash((self.kind, self.subset, self.point))


class RationalForm:
    """Top-degree form N/D dt_{v1}^...^dt_{vm} over exact rationals.

    `variables` is the ascending tuple of active t-indices, `denominator`
    a dict factor -> positive multiplicity.  Construction gcd-reduces the
    numerator against the linear factors so pole orders read off the multiset.
    """

    def __init__(self, nvars, variables, numerator, denominator, points, reduce=True):
        self.nvars = nvars
        self.variables = tuple(sorted(variables))
        self.numerator = numerator
        self.denominator = {f: m for f, m in denominator.items() if m}
        self.points = tuple(Fraction(p) for p in points)
        if reduce:
            self._reduce()
        if self.numerator.is_zero():
            self.denominator = {}

    @classmethod
    def zero(cls, nvars, variables, points):
        return cls(nvars, variables, SparsePoly(nvars), {}, points, reduce=False)

    def is_zero(self):
        return self.numerator.is_zero()

    def copy_with(self, **kw):
        args = dict(
            nvars=self.nvars,
            variables=self.variables,
            numerator=self.numerator,
            denominator=self.denominator,
            points=self.points,
        )
        args.update(kw)
        return RationalForm(**args)

    def _reduce(self):
        for factor in list(self.denominator):
            kind = factor[0]
            while self.denominator.get(factor, 0) > 0 and not self.numerator.is_zero():
                if kind == "tt":
                    q, r = divmod_linear(self.numerator, factor[1], c_var=factor[2])
                else:
                    q, r = divmod_linear(
                        self.numerator, factor[1],
                        c_const=self.points[factor[2] - 1])
                if r.is_zero():
                    self.numerator = q
                    self.denominator[factor] -= 1
                    if self.denominator[factor] == 0:
                        del self.denominator[factor]
                else:
                    break

    # arithmetic -----------------------------------------------------------

    def scale(self, c):
        return self.copy_with(numerator=self.numerator.scale(c))

    def mul_poly(self, p):
        return self.copy_with(numerator=self.numerator * p)

    def __add__(self, other):
        if (self.nvars, self.variables, self.points) != (
            other.nvars, other.variables, other.points
        ):
            raise ValueError("forms live on different spaces")
        denom = {}
        for f in set(self.denominator) | set(other.denominator):
            denom[f] = max(self.denominator.get(f, 0), other.denominator.get(f, 0))
        num_a, num_b = self.numerator, other.numerator
        for f, m in denom.items():
            fp = factor_poly(f, self.nvars, self.points)
            for _ in range(m - self.denominator.get(f, 0)):
                num_a = num_a * fp
            for _ in range(m - other.denominator.get(f, 0)):
                num_b = num_b * fp
        return RationalForm(self.nvars, self.variables, num_a + num_b, denom, self.points)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        return (self - other).is_zero()

    def __repr__(self):
        dd = " ".join(f"{f}^{m}" for f, m in sorted(self.denominator.items()))
        return f"RationalForm(({self.numerator}) / [{dd}] d{self.variables})"

    # pole structure ---------------------------------------------------------

    def pole_order(self, factor):
        """Order of the pole along the divisor given by a canonical factor."""
        if len(factor) == 3 and factor[0] == "tt" and factor[1] > factor[2]:
            factor = ("tt", factor[2], factor[1])
        return self.denominator.get(factor, 0)

    def regular_at_infinity(self, a):
        """No pole along t_a = infinity (order of Q there <= -2)."""
        if self.is_zero():
            return True
        incident = sum(m for f, m in self.denominator.items() if a in _fvars(f))
        return self.numerator.degree_in(a) - incident <= -2

    # residues ---------------------------------------------------------------

    def residue_diagonal(self, a, b):
        """Poincare residue along t_a = t_b, keeping the smaller variable.

        Extraction against f = t_hi - t_lo; the stored canonical factor is
        t_lo - t_hi = -f, hence the constant -1.
        """
        if a == b:
            raise ResidueError("a = b")
        lo, hi = min(a, b), max(a, b)
        if lo not in self.variables or hi not in self.variables:
            raise ValueError("inactive variable")
        pole = ("tt", lo, hi)
        mult = self.denominator.get(pole, 0)
        if mult > 1:
            raise ResidueError(f"pole of order {mult} along {pole}")
        new_vars = tuple(v for v in self.variables if v != hi)
        if mult == 0:
            return RationalForm.zero(self.nvars, new_vars, self.points)
        num = self.numerator.substitute_var(hi, lo).scale(-1)
        denom = {}
        for f, m in self.denominator.items():
            if f == pole:
                continue
            if f[0] == "tt":
                x, y = f[1], f[2]
                if hi in (x, y):
                    x = lo if x == hi else x
                    y = lo if y == hi else y
                    nf, s = canonical_tt(x, y)
                    if s < 0 and m % 2:
                        num = num.scale(-1)
                    f = nf
            else:
                if f[1] == hi:
                    f = ("tz", lo, f[2])
            denom[f] = denom.get(f, 0) + m
        return RationalForm(self.nvars, new_vars, num, denom, self.points)

    def residue_at_point(self, a, j):
        """Poincare residue along t_a = z_j."""
        if a not in self.variables:
            raise ValueError("inactive variable")
        pole = ("tz", a, j)
        mult = self.denominator.get(pole, 0)
        if mult > 1:
            raise ResidueError(f"pole of order {mult} along {pole}")
        new_vars = tuple(v for v in self.variables if v != a)
        if mult == 0:
            return RationalForm.zero(self.nvars, new_vars, self.points)
        z = self.points[j - 1]
        num = self.numerator.substitute_const(a, z)
        denom = {}
        scale = Fraction(1)
        for f, m in self.denominator.items():
            if f == pole:
                continue
            if f[0] == "tt":
                x, y = f[1], f[2]
                if x == a:
                    # (z_j - t_y) = -(t_y - z_j)
                    f = ("tz", y, j)
                    if m % 2:
                        scale = -scale
                elif y == a:
                    f = ("tz", x, j)
            else:
                if f[1] == a:
                    scale /= (z - self.points[f[2] - 1]) ** m
                    continue
            denom[f] = denom.get(f, 0) + m
        if scale != 1:
            num = num.scale(scale)
        return RationalForm(self.nvars, new_vars, num, denom, self.points)


def _fvars(factor):
    return (factor[1], factor[2]) if factor[0] == "tt" else (factor[1],)


def residue_diagonal(form, a, b):
    return form.residue_diagonal(a, b)


def residue_at_point(form, a, j):
    return form.residue_at_point(a, j)


def iterated_residue(form, indices):
    """Res along t_m = t_a for a in indices minus its minimum, in the given order."""
    indices = list(indices)
    if len(indices) <= 1:
        return form
    m = min(indices)
    out = form
    for a in indices:
        if a == m:
            continue
        out = out.residue_diagonal(a, m)
    return out


# stratum expansions ---------------------------------------------------------


def _shifted_numerator(form, stratum, initial=None):
    """Numerator with t_a := (anchor) + u_a; u_a reuses slot a.

    S1: anchor is t_s (s = the initial variable, default min), u_s = 0.
    S2: anchor is the constant z_j for every subset variable.
    Returns (poly, u_slots).
    """
    num = form.numerator
    if stratum.kind == "S1":
        s = initial if initial is not None else stratum.subset[0]
        if s not in stratum.subset:
            raise ValueError("initial variable must belong to the stratum")
        u_slots = [a for a in stratum.subset if a != s]
        for a in u_slots:
            repl = SparsePoly.variable(num.nvars, s) + SparsePoly.variable(num.nvars, a)
            num = num.substitute_poly(a, repl)
        return num, u_slots
    if stratum.kind == "S2":
        z = form.points[stratum.point - 1]
        u_slots = list(stratum.subset)
        for a in u_slots:
            repl = SparsePoly.const(num.nvars, z) + SparsePoly.variable(num.nvars, a)
            num = num.substitute_poly(a, repl)
        return num, u_slots
    raise ValueError("S1/S2 only")


def _u_valuation(poly, u_slots):
    if poly.is_zero():
        return None
    slots = [a - 1 for a in u_slots]
    return min(sum(e[i] for i in slots) for e in poly.terms)


def internal_factors(form, stratum):
    """Denominator factors vanishing identically on the stratum (the correction factor)."""
    sub = set(stratum.subset)
    out = {}
    for f, m in form.denominator.items():
        if f[0] == "tt" and f[1] in sub and f[2] in sub:
            out[f] = m
        elif (
            stratum.kind == "S2"
            and f[0] == "tz"
            and f[1] in sub
            and f[2] == stratum.point
        ):
            out[f] = m
    return out


def lowest_degree_term(form, stratum, initial=None):
    """(d0, h_num, h_den, P): lowest jet of P*Q on the stratum.

    P is the minimal internal correction factor; d0 the valuation of P*Q in
    the collapse variables; h = h_num/h_den the lowest term written back in
    the original t variables (u_a replaced by t_a - anchor).  `initial`
    selects the S1 anchor variable; d0 and h do not depend on it.
    """
    if form.is_zero():
        raise ValueError("zero form has no lowest term")
    P = internal_factors(form, stratum)
    num, u_slots = _shifted_numerator(form, stratum, initial=initial)
    d0 = _u_valuation(num, u_slots)
    slots = [a - 1 for a in u_slots]
    low = SparsePoly(num.nvars,
                     {e: c for e, c in num.terms.items()
                      if sum(e[i] for i in slots) == d0})
    # back-substitute u_a -> t_a - anchor: the shift is its own inverse with
    # the opposite sign on the anchor term
    if stratum.kind == "S1":
        s = initial if initial is not None else stratum.subset[0]
        for a in u_slots:
            repl = SparsePoly.variable(num.nvars, a) - SparsePoly.variable(num.nvars, s)
            low = low.substitute_poly(a, repl)
    else:
        z = form.points[stratum.point - 1]
        for a in u_slots:
            repl = SparsePoly.variable(num.nvars, a) - SparsePoly.const(num.nvars, z)
            low = low.substitute_poly(a, repl)
    h_den = SparsePoly.const(form.nvars, 1)
    for f, m in form.denominator.items():
        if f in P:
            continue
        fp = factor_poly(f, form.nvars, form.points)
        # degree-0 part of the factor on the stratum: substitute the collapse
        if stratum.kind == "S1":
            s = initial if initial is not None else stratum.subset[0]
            for a in stratum.subset:
                if a != s:
                    fp = fp.substitute_var(a, s)
        else:
            z = form.points[stratum.point - 1]
            for a in stratum.subset:
                fp = fp.substitute_const(a, z)
        for _ in range(m):
            h_den = h_den * fp
    return d0, low, h_den, P


def stratum_degree(form, stratum):
    """Degree of Q on an S1/S2 stratum: d0 - deg(P)."""
    if form.is_zero():
        return None
    P = internal_factors(form, stratum)
    num, u_slots = _shifted_numerator(form, stratum)
    return _u_valuation(num, u_slots) - sum(P.values())


def log_degree(form, stratum):
    """Logarithmic degree d^S: stratum degree plus the stratum codimension.

    S1 of size L has codimension L-1, S2 has L; SINF computed after u = 1/t
    with the Jacobian factor u^-2 per inverted variable.
    """
    if form.is_zero():
        return None
    if stratum.kind in ("S1", "S2"):
        codim = len(stratum.subset) - (1 if stratum.kind == "S1" else 0)
        return stratum_degree(form, stratum) + codim
    sub = set(stratum.subset)
    m = len(sub)
    slots = [a - 1 for a in sub]
    # t^e inverts to u^-e, so val(N o inv) = -max over terms of the subset degree
    val_num = -max(sum(e[i] for i in slots) for e in form.numerator.terms)
    incident = sum(
        mult for f, mult in form.denominator.items() if sub & set(_fvars(f))
    )
    return val_num + incident - 2 * m + m


def vanishes_on_stratum(form, stratum):
    """Whether the (pole-cleared) form vanishes at the generic stratum point."""
    if form.is_zero():
        return True
    return stratum_degree(form, stratum) >= 1


def sum_residues_zero(form):
    """Check that all residues of a univariate rational 1-form sum to zero.

    Finite residues are extracted at the simple poles t = z_j; the residue at
    infinity comes from the 1/t coefficient of the expansion there.
    """
    if form.is_zero():
        return True
    if len(form.variables) != 1:
        raise ValueError("need a 1-form in a single variable")
    (a,) = form.variables
    total = Fraction(0)
    for f, m in form.denominator.items():
        if f[0] != "tz" or f[1] != a:
            raise ValueError("univariate form with a foreign factor")
        if m > 1:
            raise ResidueError("higher-order pole")
        res = form.residue_at_point(a, f[2])
        total += res.numerator.terms.get((0,) * form.nvars, Fraction(0))
    # residue at infinity: -(coefficient of t^{deg D - 1} of N mod D) / lc(D)
    num = form.numerator
    den = SparsePoly.const(form.nvars, 1)
    for f, m in form.denominator.items():
        fp = factor_poly(f, form.nvars, form.points)
        for _ in range(m):
            den = den * fp
    dd = den.degree_in(a)
    while num.degree_in(a) >= dd and not num.is_zero():
        k = num.degree_in(a)
        lead = num.coefficients_in(a)[k]
        lc = lead.terms.get((0,) * form.nvars)
        shift = SparsePoly(
            form.nvars,
            {tuple((k - dd) if i == a - 1 else 0 for i in range(form.nvars)): lc},
        )
        num = num - den * shift
    coeff = num.coefficients_in(a).get(dd - 1)
    res_inf = -(coeff.terms.get((0,) * form.nvars, Fraction(0)) if coeff else Fraction(0))
    return total + res_inf == 0


def pole_order(form, factor):
    return form.pole_order(tuple(factor))
