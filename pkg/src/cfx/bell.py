"""Ordinary (partial), exponential, and complete Bell polynomials.

Everything here is generic over the coefficient ring: sequences may hold
Fractions, floats, or polynomial objects, and the same recurrences serve the
exact symbolic layer and the floating-point layer.  The only requirements on
values are ``+``, ``*``, and multiplication by ``Fraction`` (for the exact
division by integer factorials).

The ordinary partial Bell polynomial B^_{rj}(y) is the coefficient of t^r in
S(t)^j for S(t) = sum_{r>=1} y_r t^r.  ``ordinary_bell_b`` is the partition
normalized variant b_{rj} = B^_{rj}/j!, ``exponential_bell`` rescales to the
exponential convention, and ``complete_bell`` sums a full row.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

MAX_ORDER = 24


class SeqLengthError(LookupError):
    """A sequence index beyond the stored coefficients was requested."""


class BellOrderError(ValueError):
    """Requested order exceeds the configured guard."""


class Seq:
    """A 1-indexed coefficient sequence y_1, y_2, ...

    Index 0 is not addressable and reading past the stored length is an
    error, never an implicit zero.  Instances also carry the per-sequence
    recurrence cache for the partial Bell values, so repeated expansion
    passes over one sequence do not recompute.
    """

    __slots__ = ("_values", "_cache")

    def __init__(self, values):
        self._values = list(values)
        self._cache = {}

    def __len__(self):
        return len(self._values)

    def __getitem__(self, r):
        if r < 1:
            raise SeqLengthError(f"sequence index {r} < 1")
        if r > len(self._values):
            raise SeqLengthError(
                f"sequence index {r} beyond stored length {len(self._values)}"
            )
        return self._values[r - 1]


def _as_seq(y):
    return y if isinstance(y, Seq) else Seq(y)


def _check_order(r):
    if r > MAX_ORDER:
        raise BellOrderError(f"order {r} exceeds guard MAX_ORDER={MAX_ORDER}")


def partial_ordinary_bell(r, j, y):
    """B^_{rj}(y): coefficient of t^r in (sum y_k t^k)^j.

    Zero for r < j; the j = 0 row is the unit series.  Computed by the
    convolution recurrence B^_{r,j+1} = sum_{a=j}^{r-1} B^_{aj} y_{r-a},
    cached on the sequence object.
    """
    if r < 0 or j < 0:
        raise ValueError("orders must be nonnegative")
    _check_order(r)
    if j == 0:
        return 1 if r == 0 else 0
    if r < j:
        return 0
    y = _as_seq(y)
    if len(y) < r - j + 1:
        raise SeqLengthError(
            f"B^_{{{r},{j}}} needs {r - j + 1} coefficients, have {len(y)}"
        )
    return _partial(r, j, y)


def _partial(r, j, y):
    if r < j:
        return 0
    if j == 0:
        return 1 if r == 0 else 0
    key = (r, j)
    hit = y._cache.get(key)
    if hit is not None:
        return hit
    if j == 1:
        val = y[r]
    else:
        total = 0
        for a in range(j - 1, r):
            b = _partial(a, j - 1, y)
            if isinstance(b, (int, float, Fraction)) and not b:
                continue
            total = total + b * y[r - a]
        val = total
    y._cache[key] = val
    return val


def ordinary_bell_b(r, j, y):
    """b_{rj}(y) = B^_{rj}(y)/j!: the sum of partition brackets of size r in
    j parts."""
    val = partial_ordinary_bell(r, j, y)
    if isinstance(val, int) and val == 0:
        return 0
    return val * Fraction(1, factorial(j))


def exponential_bell(r, j, x):
    """Exponential partial Bell polynomial B_{rj}(x) = r! b_{rj}(y) at
    y_k = x_k / k!."""
    if r < 0 or j < 0:
        raise ValueError("orders must be nonnegative")
    _check_order(r)
    if j == 0:
        return 1 if r == 0 else 0
    if r < j:
        return 0
    x = _as_seq(x)
    y = Seq([x[k] * Fraction(1, factorial(k)) for k in range(1, r - j + 2)])
    return ordinary_bell_b(r, j, y) * factorial(r)


def complete_bell(r, x):
    """Complete exponential Bell polynomial B_r(x) = sum_i B_{ri}(x);
    B_0 = 1."""
    if r < 0:
        raise ValueError("order must be nonnegative")
    if r == 0:
        return 1
    _check_order(r)
    x = _as_seq(x)
    if len(x) < r:
        raise SeqLengthError(f"B_{r} needs {r} coefficients, have {len(x)}")
    total = 0
    for i in range(1, r + 1):
        total = total + exponential_bell(r, i, x)
    return total
