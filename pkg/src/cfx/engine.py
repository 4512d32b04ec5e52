"""The expansion core.

Symbolic layer: the cdf-correction polynomials h_r, the forward quantile-map
polynomials f_r and inverse quantile-map polynomials g_r, all represented as
polynomials in the adjusted-cumulant symbols L_1, L_2, ... whose coefficients
are exact polynomials in the generalized-Hermite symbols.  h_r comes from the
weighted-partition decomposition; f_r and g_r come from the inversion ladder
(the c-functions and D-operators of ``hbasis``) applied to Bell polynomials
in the h-sequence.

Standardized layer: substituting each L_k by its truncated power series in
1/n turns the formal tables into the order-by-order expansion terms e_r(x)
actually evaluated against a cumulant model; the split into a leading part
and a series-correction part, and the closed forms of the leading part, are
both implemented and cross-checked by the test-suite.

Evaluation layer: cdf, quantile and density expansions about a concrete base
distribution, and the term-count accounting used to compare truncation
strategies.

The symbolic tables are built once (single-threaded) and cached immutable;
evaluation calls are pure.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

from . import basedist, cumulants, hbasis
from .bell import Seq, partial_ordinary_bell
from .hpoly import Poly
from .partitions import LSeries, Partition, bracket_series_coeff, hset

DEFAULT_MAX_ORDER = 12


class OrderError(ValueError):
    """Requested expansion order exceeds the configured guard."""


def max_order():
    """The order guard; overridable through the CFX_MAX_ORDER variable."""
    env = os.environ.get("CFX_MAX_ORDER")
    return int(env) if env else DEFAULT_MAX_ORDER


def _check_order(r):
    guard = max_order()
    if r > guard:
        raise OrderError(f"order {r} exceeds the guard {guard} "
                         f"(set CFX_MAX_ORDER to raise it)")
    if r < 0:
        raise OrderError(f"order {r} < 0")


# ---------------------------------------------------------------------------
# formal polynomials in L with H-polynomial coefficients
# ---------------------------------------------------------------------------

_EMPTY = Partition(())


class LPoly:
    """Polynomial in the L symbols with Poly (H-polynomial) coefficients.

    Terms map a Partition (read as the plain monomial prod_k L_k^{i_k}) to a
    Poly.  The bracket-normalized view ([pi] = monomial / prod i_k!) is
    produced by :meth:`bracket_items`.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for part, val in terms.items():
                if isinstance(val, (int, Fraction, float)):
                    val = Poly.const(val)
                if val:
                    self.terms[part] = val

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({_EMPTY: Poly.const(1)})

    @classmethod
    def monomial(cls, partition, value=1):
        return cls({partition: value if isinstance(value, Poly) else Poly.const(value)})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, LPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, LPoly):
            out = dict(self.terms)
            for part, val in other.terms.items():
                s = out.get(part)
                s = val if s is None else s + val
                if s:
                    out[part] = s
                else:
                    out.pop(part, None)
            res = LPoly()
            res.terms = out
            return res
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        res = LPoly()
        res.terms = {part: -val for part, val in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LPoly):
            out = {}
            for p1, v1 in self.terms.items():
                for p2, v2 in other.terms.items():
                    part = p1.merge(p2)
                    val = v1 * v2
                    s = out.get(part)
                    s = val if s is None else s + val
                    if s:
                        out[part] = s
                    else:
                        out.pop(part, None)
            res = LPoly()
            res.terms = out
            return res
        if isinstance(other, (int, float, Fraction, Poly)):
            res = LPoly()
            for part, val in self.terms.items():
                v = val * other
                if v:
                    res.terms[part] = v
            return res
        return NotImplemented

    def __rmul__(self, other):
        return self.__mul__(other)

    def map_values(self, fn):
        res = LPoly()
        for part, val in self.terms.items():
            v = fn(val)
            if v:
                res.terms[part] = v
        return res

    def bracket_items(self):
        """[(partition, coefficient-of-[pi])] sorted; the plain-monomial
        values are rescaled by prod i_k!."""
        out = []
        for part, val in self.terms.items():
            out.append((part, val * part.norm))
        return sorted(out, key=lambda kv: kv[0])

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __repr__(self):
        inner = " + ".join(f"[{p.text()}]*({(v * p.norm).text()})"
                           for p, v in self.bracket_items())
        return f"LPoly({inner or '0'})"


# ---------------------------------------------------------------------------
# the coefficient tables C_rk and the h / f / g formal expansions
# ---------------------------------------------------------------------------

def crk_sym(r, k):
    """The coefficient of H_{k-1} in h_r, as an LPoly: the bracket sum over
    all weight-r partitions of k (each bracket carries coefficient one)."""
    out = LPoly()
    for pi in hset(r, k):
        out = out + LPoly.monomial(pi, Fraction(1, pi.norm))
    return out


def crk_recurrence(r, k):
    """The same coefficient by the recurrence path: the boundary diagonal
    C_rr from the parts-1-and-2 partitions, then C_{r,r+2i} by convolving
    lower diagonal values with ordinary Bell polynomials of the shifted
    symbols Lbar_m = L_{m+2}."""
    if r == 0:
        return LPoly.one() if k == 0 else LPoly.zero()
    if k < r or k > 3 * r or (k - r) % 2:
        return LPoly.zero()

    def c_diag(j):
        if j == 0:
            return LPoly.one()
        out = LPoly()
        for i in range(0, j // 2 + 1):
            exp = {}
            if j - 2 * i:
                exp[1] = j - 2 * i
            if i:
                exp[2] = i
            pi = Partition(exp)
            out = out + LPoly.monomial(pi, Fraction(1, pi.norm))
        return out

    i = (k - r) // 2
    if i == 0:
        return c_diag(r)
    lbar = Seq([LPoly.monomial(Partition.of(m + 2)) for m in range(1, r + 1)])
    total = LPoly.zero()
    for j in range(0, r - i + 1):
        b = partial_ordinary_bell(r - j, i, lbar)
        if isinstance(b, int):
            continue
        total = total + c_diag(j) * b * Fraction(1, math.factorial(i))
    return total


def crk(r, k, L=None):
    """C_rk: symbolic LPoly when L is None, a number for a plain 1-indexed
    coefficient sequence, or the list of series coefficients for an
    LSeries."""
    if r < 1:
        raise ValueError("order must be >= 1")
    _check_order(r)
    sym = crk_sym(r, k)
    if L is None:
        return sym
    if isinstance(L, LSeries):
        out = []
        for i in range(L.order + 1):
            acc = 0
            for pi, val in sym.terms.items():
                acc = acc + bracket_series_coeff(pi, L, i) * pi.norm * val.const_value()
            out.append(acc)
        return out
    seq = L if isinstance(L, Seq) else Seq(L)
    total = 0
    for pi, val in sym.terms.items():
        prod = val.const_value()
        for part, mult in pi.items():
            for _ in range(mult):
                prod = prod * seq[part]
        total = total + prod
    return total


_h_cache = {}
_fg_cache = {}


def h_formal(r):
    """h_r as an LPoly: sum over weight-r partitions pi of [pi] H_{|pi|-1}."""
    if r < 1:
        raise ValueError("order must be >= 1")
    _check_order(r)
    if r not in _h_cache:
        out = LPoly()
        for k in range(r, 3 * r + 1, 2):
            for pi in hset(r, k):
                out = out + LPoly.monomial(pi, hbasis.H(k - 1) * Fraction(1, pi.norm))
        _h_cache[r] = out
    return _h_cache[r]


def fg_formal(kind, r):
    """f_r or g_r as an LPoly, from the inversion ladder applied to Bell
    polynomials in (h_1, ..., h_r):

        f_r = sum_k (-1)^{k-1} c_k b_{rk}(h)
        g_r = sum_k (-1)^{k-1} D_k b_{rk}(h)

    where the D_k operator acts on the whole symbolic product b_{rk}(h).
    """
    if kind == "h":
        return h_formal(r)
    if kind not in ("f", "g"):
        raise ValueError(f"kind must be h, f or g, not {kind!r}")
    if r < 1:
        raise ValueError("order must be >= 1")
    _check_order(r)
    key = (kind, r)
    if key not in _fg_cache:
        hs = Seq([h_formal(j) for j in range(1, r + 1)])
        total = LPoly.zero()
        for k in range(1, r + 1):
            b = partial_ordinary_bell(r, k, hs) * Fraction(1, math.factorial(k))
            sign = 1 if (k - 1) % 2 == 0 else -1
            if kind == "f":
                total = total + b * hbasis.c_function(k) * sign
            else:
                total = total + b.map_values(lambda p, kk=k: hbasis.apply_Dk(kk, p)) * sign
        _fg_cache[key] = total
    return _fg_cache[key]


def coefficient_table(kind, r, basis="H"):
    """The pairs (partition, e(partition)) of the order-r expansion.

    ``basis``: "H" for the raw symbolic form, "a" for the log-density
    derivative form, "x" for the normal specialization (polynomial in x).
    Partitions whose coefficient is identically zero are omitted.
    """
    table = fg_formal(kind, r).bracket_items()
    if basis == "H":
        return table
    if basis == "a":
        return [(pi, hbasis.to_a_basis(val)) for pi, val in table]
    if basis == "x":
        out = []
        for pi, val in table:
            spec = hbasis.normal_specialize(val)
            if spec:
                out.append((pi, spec))
        return out
    raise ValueError(f"unknown basis {basis!r}")


def coefficient_lookup(kind, r, basis="H"):
    return {pi: val for pi, val in coefficient_table(kind, r, basis)}


def export_table_json(kind, r, basis="H"):
    """Stable JSON document for one symbolic coefficient table."""
    terms = []
    for pi, val in coefficient_table(kind, r, "H"):
        entry = {"partition": pi.text(), "coeff_H": val.text()}
        if basis == "a":
            entry["coeff_a"] = hbasis.to_a_basis(val).text("a")
        elif basis == "x":
            entry["coeff_x"] = hbasis.normal_specialize(val).text("x")
        terms.append(entry)
    return {"kind": kind, "r": r, "terms": terms}


# ---------------------------------------------------------------------------
# standardized expansions
# ---------------------------------------------------------------------------

def _delta(r):
    return 1 if r >= 3 else 0


def lseries_from_atable(atable, kmax, order):
    """The truncated adjusted-cumulant series: row k holds the coefficients
    of L_k = sum_j (A_{k,k+j-delta}/k!) n^-j."""
    rows = {}
    for k in range(1, kmax + 1):
        d = _delta(k)
        rows[k] = [atable.abar(k, k + j - d) for j in range(order + 1)]
    return LSeries(rows, order)


class _LazyLSeries:
    """Adjusted-cumulant series backed directly by a coefficient table.

    Coefficients are read on demand, so only the entries a bracket actually
    touches are required of the model."""

    __slots__ = ("atable", "order")

    def __init__(self, atable, order):
        self.atable = atable
        self.order = order

    def coeff(self, r, j):
        return self.atable.abar(r, r + j - _delta(r))


def e_r_standardized(kind, r, atable, J=None, K=None):
    """The order-r standardized expansion polynomial e_r(x), as a Poly in H.

    Generic path: e_r = sum_{0 <= i < r/2} e_{r-2i,i} where e_{s,i} collects
    the n^-i series coefficient of every bracket in the order-s formal
    table.  J and K are accepted for interface symmetry; the zero pattern
    they induce is already carried by the table's values.
    """
    _check_order(r)
    order = (r - 1) // 2
    L = _LazyLSeries(atable, order)
    total = Poly()
    for i in range(0, order + 1):
        s = r - 2 * i
        for pi, val in coefficient_table(kind, s):
            c = bracket_series_coeff(pi, L, i)
            if c:
                total = total + val * c
    return total


def nabla_r(r, atable):
    """The single-bracket closed form: the needed-coefficient diagonal
    sum of Abar_{2i-r,i} H_{2i-r-1}."""
    lo = (r + 2) // 2
    total = Poly()
    for i in range(lo, r + 2):
        c = atable.abar(2 * i - r, i)
        if c:
            total = total + hbasis.H(2 * i - r - 1) * c
    return total


_NABLA_RE = {
    4: ((Partition.parse("4^2"), 0),),
    5: ((Partition.parse("4 5"), 0), (Partition.parse("3 4"), 1)),
    6: ((Partition.parse("5^2"), 0), (Partition.parse("4 6"), 0),
        (Partition.parse("4^3"), 0), (Partition.parse("4^2"), 1),
        (Partition.parse("3 5"), 1), (Partition.parse("3^2"), 2)),
}


def nabla_re(kind, r, atable):
    """The multi-bracket residual closed form: the short list of partitions
    that survive at order r under the truncated-and-matched zero pattern."""
    if r <= 3:
        return Poly()
    if r not in _NABLA_RE:
        raise OrderError(f"closed residual form only tabulated through r=6, got {r}")
    L = _LazyLSeries(atable, (r - 1) // 2)
    total = Poly()
    for pi, i in _NABLA_RE[r]:
        table = coefficient_lookup(kind, pi.weight)
        val = table.get(pi)
        if val is None:
            continue
        c = bracket_series_coeff(pi, L, i)
        if c:
            total = total + val * c
    return total


def e_r_closed(kind, r, atable):
    """nabla_r + nabla_re: the split evaluation, valid under the matched
    zero pattern at the per-order (J, K) regime."""
    return nabla_r(r, atable) + nabla_re(kind, r, atable)


# ---------------------------------------------------------------------------
# evaluation contexts and the three expansions
# ---------------------------------------------------------------------------

class ExpansionContext:
    """Everything an evaluation needs: the coefficient table to expand with,
    the sample-size parameter, the affine frame (center, scale) mapping the
    standardized variable back to the estimate, and the base distribution."""

    def __init__(self, atable, n, center, scale, base, label="", flipped=False,
                 tau=None, m=None):
        self.atable = atable
        self.n = n
        self.center = center
        self.scale = scale
        self.base = base
        self.label = label
        self.flipped = flipped
        self.tau = tau
        self.m = m

    @classmethod
    def raw(cls, table, n, base=None):
        """The plain standardized estimate (no truncation tricks), expanded
        about the given base (default normal)."""
        atable = cumulants.standardize(table)
        scale = math.sqrt(float(table.a21) / float(n))
        return cls(atable, n, float(table.theta), scale,
                   base or basedist.normal(), label=table.label or "raw")

    @classmethod
    def matched_gamma(cls, table, n, J=1, K=1):
        """The skew-matched gamma pipeline.

        Negates the estimate when its skewness coefficient is negative (the
        caller must interpret results through ``flipped``), truncates the
        mean/variance series at (J, K), matches the third-order coefficient
        with a gamma of mean m = n*tau, and expands the difference about the
        standardized gamma base.
        """
        flipped = False
        work = table
        a32 = cumulants.standardize(table).get(3, 2)
        if a32 == 0:
            raise cumulants.MatchingError("estimate has zero skewness coefficient")
        if a32 < 0:
            work = table.negated()
            flipped = True
        a_theta = cumulants.standardize(work)
        a_theta_jk = cumulants.jk_adjust(a_theta, J, K)
        a_w_jk = cumulants.jk_adjust(
            cumulants.standardize(cumulants.model_gamma()), J, K)
        tau = cumulants.match_tau(a_theta_jk, a_w_jk)
        diff = cumulants.diff_coeffs(a_theta_jk, a_w_jk, tau, matched_skew=True)
        s1, s2 = cumulants.truncated_mean_var(work, J, K, n)
        m = float(n) * float(tau)
        base = basedist.standardized_gamma(m)
        return cls(diff, n, float(s1), math.sqrt(float(s2)), base,
                   label=(table.label or "model") + "~gamma-matched",
                   flipped=flipped, tau=tau, m=m)

    def eval_e(self, kind, r, x, shift=0):
        poly = (e_r_standardized(kind, r, self.atable) if shift == 0
                else _density_e(r, self.atable, shift - 1))
        top = poly.max_index()
        if top == 0:
            return float(poly.const_value())
        hvals = self.base.h_seq(x, top)
        return float(hbasis.hp_eval(poly, [float(v) for v in hvals]))


def _density_e(r, atable, i):
    """The order-r density-expansion polynomial: every H_k of the cdf
    polynomial h_r(x) bumped to H_{k+i+1} (the constant terms included)."""
    order = (r - 1) // 2
    L = _LazyLSeries(atable, order)
    total = Poly()
    for ii in range(0, order + 1):
        s = r - 2 * ii
        for k in range(s, 3 * s + 1, 2):
            for pi in hset(s, k):
                c = bracket_series_coeff(pi, L, ii)
                if c:
                    total = total + hbasis.H(pi.size + i) * c
    return total


def validate_context(ctx, R):
    cumulants.validate_for_order(ctx.atable, R)


def cdf_expand(ctx, x, R):
    """P_n(x) to order R: base cdf minus density times the h-series.

    Returns the value, the base cdf, and the per-order contributions
    (term r is the whole correction -p(x) n^{-r/2} h_r(x))."""
    validate_context(ctx, R)
    base_value = ctx.base.cdf(x)
    px = ctx.base.pdf(x)
    nn = float(ctx.n)
    terms = []
    total = base_value
    for r in range(1, R + 1):
        er = ctx.eval_e("h", r, x)
        t = -px * nn ** (-r / 2.0) * er
        terms.append(t)
        total += t
    return {"x": x, "base": base_value, "terms": terms, "value": total}


def quantile_expand(ctx, p, R, exact=None):
    """Successive quantile terms and totals at probability p.

    Term 0 is center + scale*x with x the base quantile; term r >= 1 adds
    scale * n^{-r/2} g_r(x).  When ``exact`` is supplied an error column
    (total - exact) is included.
    """
    if not 0.0 < p < 1.0:
        raise basedist.DomainError(f"probability {p} not in (0, 1)")
    validate_context(ctx, R)
    x = ctx.base.inv_cdf(p)
    nn = float(ctx.n)
    rows = []
    total = ctx.center + ctx.scale * x
    term = total
    for r in range(0, R + 1):
        if r > 0:
            term = ctx.scale * nn ** (-r / 2.0) * ctx.eval_e("g", r, x)
            total += term
        row = {"order": r, "term": term, "total": total}
        if exact is not None:
            row["error"] = total - exact
        rows.append(row)
    return {"p": p, "x": x, "rows": rows, "value": total,
            "diverges_at": divergence_order([row["term"] for row in rows])}


def density_expand(ctx, x, i, R):
    """The i-th sign-alternating density derivative expansion:
    p(x) [H_i(x) + sum_{r<=R} n^{-r/2} h_{ir}(x)]."""
    if i < 0:
        raise ValueError("derivative order must be >= 0")
    validate_context(ctx, R)
    px = ctx.base.pdf(x)
    base_term = 1.0 if i == 0 else float(ctx.base.h_seq(x, i)[i - 1])
    nn = float(ctx.n)
    terms = [px * base_term]
    total = terms[0]
    for r in range(1, R + 1):
        t = px * nn ** (-r / 2.0) * ctx.eval_e("h", r, x, shift=i + 1)
        terms.append(t)
        total += t
    return {"x": x, "i": i, "terms": terms, "value": total}


def divergence_order(terms):
    """First order at which the nonzero term magnitudes stop decreasing, or
    None.  (Detection only; nothing is resummed.)"""
    mags = [(r, abs(t)) for r, t in enumerate(terms) if abs(t) > 0]
    for (r0, m0), (r1, m1) in zip(mags, mags[1:]):
        if m1 >= m0 and r0 >= 1:
            return r1
    return None


# ---------------------------------------------------------------------------
# term-count accounting
# ---------------------------------------------------------------------------

def _pattern_atable(J, K, matched, rmax=14, imax=20):
    """A fully symbolic coefficient table carrying the (J, K, matched) zero
    pattern: distinct atoms A_{ri} encoded as Poly atoms with index
    100*r + i."""
    entries = {}
    for r in range(1, rmax + 1):
        for i in range(1 if r == 1 else r - 1, imax + 1):
            zero = (r == 1 and i <= J) or (r == 2 and 2 <= i <= K) \
                or (matched and (r, i) == (3, 2))
            if not zero:
                entries[(r, i)] = Poly.atom(100 * r + i)
    table = cumulants.ATable({}, "all", label=f"pattern(J={J},K={K})")
    table.entries = entries
    return table


def term_count(kind, r, J, K, matched=True, base="general", drop_multi3=False):
    """(N, M): the number of coefficient monomials in the leading part
    e_r(x, L_0) and in the series-correction part Delta_re, under the zero
    pattern of (J, K) truncation and optional skew matching.

    ``base`` selects which identically-zero e(pi) drop out: "general" keeps
    everything the symbolic tables keep, "normal" also drops coefficients
    that vanish after normal specialization.  ``drop_multi3`` reproduces the
    matched-table accounting in which multi-part partitions containing a 3
    belong to the short (skewless) tables and are not counted in the
    correction part.
    """
    if r == 0:
        return (1, 0)
    _check_order(r)
    atable = _pattern_atable(J, K, matched)
    order = (r - 1) // 2
    L = _LazyLSeries(atable, order)
    n_count = 0
    m_count = 0
    for i in range(0, order + 1):
        s = r - 2 * i
        for pi, val in coefficient_table(kind, s):
            if base == "normal" and not hbasis.normal_specialize(val):
                continue
            if i >= 1 and drop_multi3 and pi.contains(3) and pi.num_parts >= 2:
                continue
            c = bracket_series_coeff(pi, L, i)
            count = len(c.terms) if isinstance(c, Poly) else (1 if c else 0)
            if i == 0:
                n_count += count
            else:
                m_count += count
    return (n_count, m_count)


ROW_SCHEDULE = {0: (0, 1), 1: (1, 1), 2: (1, 2), 3: (2, 2), 4: (2, 3),
                5: (3, 3), 6: (3, 4)}


def term_count_cumulative(kind, rmax, schedule=None, matched=True,
                          base="general", drop_multi3=False,
                          include_order0=True, J=None, K=None):
    """Cumulative (N, M) through order rmax.

    ``schedule`` maps r to its (J, K); by default the per-order ladder
    (0,1), (1,1), (1,2), (2,2), (2,3), (3,3), (3,4).  Fixed J and K may be
    passed instead.
    """
    if schedule is None and J is not None:
        schedule = {r: (J, K) for r in range(0, rmax + 1)}
    schedule = schedule or ROW_SCHEDULE
    n_tot = 1 if include_order0 else 0
    m_tot = 0
    for r in range(1, rmax + 1):
        jr, kr = schedule[r]
        n, m = term_count(kind, r, jr, kr, matched=matched, base=base,
                          drop_multi3=drop_multi3)
        n_tot += n
        m_tot += m
    return (n_tot, m_tot)


def term_count_table(rmax=6):
    """The comparison matrix: per-order and cumulative counts for h, f, g
    under the raw normal expansion and the matched-gamma ladder."""
    rows = []
    for r in range(0, rmax + 1):
        jr, kr = ROW_SCHEDULE.get(r, (3, 4))
        for kind in ("h", "f", "g"):
            if r == 0:
                raw = match = (1, 0)
                cum_raw = cum_match = (1, 0)
            else:
                raw = term_count(kind, r, 0, 1, matched=False, base="normal")
                match = term_count(kind, r, jr, kr, matched=True,
                                   base="general", drop_multi3=True)
                cum_raw = term_count_cumulative(
                    kind, r, schedule={rr: (0, 1) for rr in range(r + 1)},
                    matched=False, base="normal")
                cum_match = term_count_cumulative(
                    kind, r, matched=True, base="general", drop_multi3=True)
            saving = 0.0
            if sum(cum_raw):
                saving = 1.0 - sum(cum_match) / sum(cum_raw)
            rows.append({"kind": kind, "r": r, "J": jr, "K": kr,
                         "raw": raw, "matched": match,
                         "cum_raw": cum_raw, "cum_matched": cum_match,
                         "saving": round(100 * saving)})
            if r == 0:
                break  # the order-0 row does not depend on the kind
    return rows


# ---------------------------------------------------------------------------
# numeric evaluation of the formal (fixed-L) series, for the inverse-map and
# oracle comparisons
# ---------------------------------------------------------------------------

def eval_formal(lpoly, lvalues, hvalues):
    """Evaluate an LPoly at numeric L values (1-indexed) and H values."""
    seq = lvalues if isinstance(lvalues, Seq) else Seq(lvalues)
    total = 0.0
    for pi, val in lpoly.terms.items():
        prod = 1.0
        for part, mult in pi.items():
            prod *= float(seq[part]) ** mult
        total += prod * float(hbasis.hp_eval(val, hvalues))
    return total


def formal_series_maps(R, lvalues, base, n):
    """The truncated forward and inverse quantile maps at fixed L values:
    F_R(x) = x - sum n^{-r/2} f_r(x), G_R(x) = x + sum n^{-r/2} g_r(x)."""
    fs = [fg_formal("f", r) for r in range(1, R + 1)]
    gs = [fg_formal("g", r) for r in range(1, R + 1)]
    kmax = 3 * R + 2

    def hv(x):
        return [float(v) for v in base.h_seq(x, kmax)]

    def F(x):
        vals = hv(x)
        return x - sum(float(n) ** (-(r + 1) / 2.0) * eval_formal(fp, lvalues, vals)
                       for r, fp in enumerate(fs))

    def G(x):
        vals = hv(x)
        return x + sum(float(n) ** (-(r + 1) / 2.0) * eval_formal(gp, lvalues, vals)
                       for r, gp in enumerate(gs))

    return F, G
