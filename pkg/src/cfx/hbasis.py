"""Exact symbolic algebra over the generalized-Hermite indeterminates.

H_r stands for the r-th derivative ratio p(x)^{-1}(-D)^r p(x) of a base
density p; the symbols obey the one differential rule

    D H_r = H_1 H_r - H_{r+1},

which extends to arbitrary polynomials by the product rule.  Everything else
(the c-functions, the inversion operators, the conversions to and from the
log-density derivatives a_r) is built from that rule plus Bell polynomials.

Two indeterminate families share the Poly core: expressions "in H" and
expressions "in a".  Conversions are explicit (``a_from_H``, ``H_from_a``,
``to_a_basis``); nothing converts implicitly.
"""

from __future__ import annotations

from math import factorial

from . import bell
from .hpoly import Poly


def H(r):
    """The symbol H_r as a polynomial; H_0 is the constant 1."""
    if r < 0:
        raise ValueError("H index must be >= 0")
    return Poly.const(1) if r == 0 else Poly.atom(r)


def a_sym(r):
    """The symbol a_r (same core, separate namespace by convention)."""
    if r < 1:
        raise ValueError("a index must be >= 1")
    return Poly.atom(r)


# -- ring operations (thin named wrappers over the Poly operators) ----------

def hp_add(p, q):
    return p + q


def hp_mul(p, q):
    return p * q


def hp_scale(c, p):
    return p * c


def hp_diff(p):
    """Apply D to a polynomial in H via the product rule."""
    out = Poly()
    for mono, c in p.terms.items():
        for pos, r in enumerate(mono):
            rest = mono[:pos] + mono[pos + 1 :]
            restp = Poly({rest: c})
            out = out + restp * (Poly.atom(1) * Poly.atom(r) - Poly.atom(r + 1))
    return out


def hp_eval(p, values):
    """Evaluate a polynomial in H at numeric H-values.

    ``values`` maps r -> H_r(x): a dict, or a list/tuple holding H_1..H_max
    (1-indexed via a Seq wrapper).  A missing index raises, never defaults.
    """
    if isinstance(values, (list, tuple)):
        values = bell.Seq(values)
    return p.eval(values)


# -- cached ladders ----------------------------------------------------------

_b_cache = {0: Poly.const(1)}
_c_cache = {1: Poly.const(1)}


def b_poly(i):
    """b_i = (H_1 + D)^i 1, as a polynomial in H."""
    if i < 0:
        raise ValueError("b index must be >= 0")
    if i not in _b_cache:
        prev = b_poly(i - 1)
        _b_cache[i] = Poly.atom(1) * prev + hp_diff(prev)
    return _b_cache[i]


def c_function(k):
    """The inversion functions c_k: c_1 = 1, c_{k+1} = (k H_1 + D) c_k."""
    if k < 1:
        raise ValueError("c index must be >= 1")
    if k not in _c_cache:
        prev = c_function(k - 1)
        _c_cache[k] = Poly.atom(1) * prev * (k - 1) + hp_diff(prev)
    return _c_cache[k]


def apply_J(m, p):
    """J_m p = m H_1 p - D p."""
    return Poly.atom(1) * p * m - hp_diff(p)


def apply_Dk(k, p):
    """The inversion operators: D_1 = identity, D_k = J_1 ... J_{k-1} with
    J_{k-1} acting first (innermost) and J_1 last."""
    if k < 1:
        raise ValueError("D index must be >= 1")
    for m in range(k - 1, 0, -1):
        p = apply_J(m, p)
    return p


def hermite_derivative(r, k):
    """D^k H_r as a polynomial in H:
    sum_i C(k,i) (-1)^i b_{k-i} H_{r+i}."""
    if r < 0 or k < 0:
        raise ValueError("indices must be nonnegative")
    out = Poly()
    for i in range(k + 1):
        sign = -1 if i % 2 else 1
        out = out + b_poly(k - i) * H(r + i) * (sign * _binom(k, i))
    return out


def _binom(n, k):
    return factorial(n) // (factorial(k) * factorial(n - k))


# -- conversions between the H and a families --------------------------------

_H_from_a_cache = {}
_a_from_H_cache = {}


def H_from_a(r):
    """H_r written in the a-symbols: (-1)^r B_r(-a)."""
    if r < 0:
        raise ValueError("index must be >= 0")
    if r == 0:
        return Poly.const(1)
    if r not in _H_from_a_cache:
        neg_a = bell.Seq([-a_sym(j) for j in range(1, r + 1)])
        val = bell.complete_bell(r, neg_a)
        _H_from_a_cache[r] = val * ((-1) ** r)
    return _H_from_a_cache[r]


def a_from_H(r):
    """a_r written in the H-symbols:
    sum_j (-1)^{r-j} (j-1)! B_{rj}(H)."""
    if r < 1:
        raise ValueError("index must be >= 1")
    if r not in _a_from_H_cache:
        hseq = bell.Seq([H(j) for j in range(1, r + 1)])
        out = Poly()
        for j in range(1, r + 1):
            term = bell.exponential_bell(r, j, hseq)
            out = out + term * (((-1) ** (r - j)) * factorial(j - 1))
        _a_from_H_cache[r] = out
    return _a_from_H_cache[r]


def b_from_a(r):
    """b_r written in the a-symbols: the complete Bell polynomial B_r(a)."""
    if r < 0:
        raise ValueError("index must be >= 0")
    if r == 0:
        return Poly.const(1)
    aseq = bell.Seq([a_sym(j) for j in range(1, r + 1)])
    val = bell.complete_bell(r, aseq)
    return val if isinstance(val, Poly) else Poly.const(val)


def to_a_basis(p):
    """Rewrite a polynomial in H as a polynomial in a, substituting each
    H_r by its a-expansion."""
    mapping = {i: H_from_a(i) for i in set(idx for m in p.terms for idx in m)}
    return p.subs(mapping)


# -- normal specialization ----------------------------------------------------

_he_cache = {0: Poly.const(1), 1: Poly.atom(1)}


def hermite_x_poly(r):
    """The probabilists' Hermite polynomial He_r as a polynomial in x
    (atom index 1): He_r = x He_{r-1} - (r-1) He_{r-2}."""
    if r < 0:
        raise ValueError("index must be >= 0")
    if r not in _he_cache:
        _he_cache[r] = (
            Poly.atom(1) * hermite_x_poly(r - 1)
            - hermite_x_poly(r - 2) * (r - 1)
        )
    return _he_cache[r]


def normal_specialize(p):
    """Substitute H_r -> He_r(x), giving a univariate polynomial in x."""
    mapping = {i: hermite_x_poly(i) for i in set(idx for m in p.terms for idx in m)}
    return p.subs(mapping)
