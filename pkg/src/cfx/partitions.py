"""Integer partitions in exponent form, weighted partition sets, brackets.

A partition pi = 1^{i_1} 2^{i_2} ... k^{i_k} carries two integers: its size
(sum of parts) and its weight under the order function S (s_weight below).
The weight is what assigns a partition to an expansion order; the size is the
index of the base-polynomial it multiplies.

The bracket [pi] of a partition against a coefficient sequence L is the
normalized product prod_k L_k^{i_k} / i_k!; ``bracket_series_coeff`` extends
this to sequences of truncated power series in 1/n and extracts a single
series coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .bell import Seq, SeqLengthError


def s_weight(r):
    """Order weight of a part: r for r <= 2, r - 2 for r >= 3."""
    if r < 1:
        raise ValueError(f"part {r} < 1")
    return r if r <= 2 else r - 2


class Partition:
    """Immutable integer partition in exponent form."""

    __slots__ = ("_items",)

    def __init__(self, exponents):
        if isinstance(exponents, dict):
            items = exponents.items()
        else:
            items = exponents
        cleaned = []
        for part, mult in sorted(items):
            if part < 1:
                raise ValueError(f"part {part} < 1")
            if mult < 1:
                raise ValueError(f"multiplicity {mult} < 1 for part {part}")
            cleaned.append((int(part), int(mult)))
        self._items = tuple(cleaned)

    @classmethod
    def of(cls, *parts):
        """Build from an explicit list of parts, e.g. Partition.of(3, 3, 4)."""
        exp = {}
        for p in parts:
            exp[p] = exp.get(p, 0) + 1
        return cls(exp)

    @classmethod
    def parse(cls, text):
        """Parse the canonical text form, e.g. ``"1^2 3^2"``."""
        exp = {}
        for tok in text.split():
            if "^" in tok:
                part, mult = tok.split("^")
                exp[int(part)] = exp.get(int(part), 0) + int(mult)
            else:
                exp[int(tok)] = exp.get(int(tok), 0) + 1
        if not exp:
            raise ValueError(f"empty partition text {text!r}")
        return cls(exp)

    # -- views ---------------------------------------------------------------

    def exponents(self):
        return dict(self._items)

    def items(self):
        return self._items

    def parts(self):
        out = []
        for part, mult in self._items:
            out.extend([part] * mult)
        return tuple(out)

    @property
    def size(self):
        return sum(p * m for p, m in self._items)

    @property
    def weight(self):
        return sum(s_weight(p) * m for p, m in self._items)

    @property
    def num_parts(self):
        return sum(m for _, m in self._items)

    @property
    def norm(self):
        """prod_k i_k!  (the bracket normalizer)."""
        out = 1
        for _, m in self._items:
            out *= factorial(m)
        return out

    def count(self, part):
        for p, m in self._items:
            if p == part:
                return m
        return 0

    def contains(self, part):
        return self.count(part) > 0

    def merge(self, other):
        """Exponent-wise sum (monomial product of the underlying L powers)."""
        exp = self.exponents()
        for p, m in other._items:
            exp[p] = exp.get(p, 0) + m
        return Partition(exp)

    def text(self):
        toks = []
        for part, mult in self._items:
            toks.append(str(part) if mult == 1 else f"{part}^{mult}")
        return " ".join(toks)

    # -- protocol ------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Partition) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __lt__(self, other):
        return (self.size, self.parts()) < (other.size, other.parts())

    def __repr__(self):
        return f"Partition({self.text()!r})"


def partitions_of(k, min_part=1, max_part=None):
    """Yield all partitions of k as Partition objects, parts ascending."""
    if k < 0:
        raise ValueError("size must be nonnegative")
    if max_part is None:
        max_part = k

    def rec(remaining, low, acc):
        if remaining == 0:
            yield Partition.of(*acc)
            return
        for part in range(low, min(remaining, max_part) + 1):
            acc.append(part)
            yield from rec(remaining - part, part, acc)
            acc.pop()

    if k == 0:
        return
    yield from rec(k, min_part, [])


def hset(r, k):
    """All partitions of k whose weight is r, as a sorted tuple.

    Empty unless k is in {r, r+2, ..., 3r} (parts 1 and 2 carry their own
    size as weight, larger parts carry size minus two, so size minus weight
    is twice the number of parts >= 3).
    """
    if r < 1:
        raise ValueError(f"order {r} < 1")
    if k < r or k > 3 * r or (k - r) % 2:
        return ()
    out = [pi for pi in partitions_of(k) if pi.weight == r]
    return tuple(sorted(out))


def bracket(pi, L):
    """[pi] = prod_k L_k^{i_k} / i_k! for a plain coefficient sequence L."""
    L = L if isinstance(L, Seq) else Seq(L)
    total = Fraction(1)
    for part, mult in pi.items():
        val = L[part]
        for _ in range(mult):
            total = total * val
        total = total * Fraction(1, factorial(mult))
    return total


class TruncationError(ValueError):
    """A series coefficient beyond the stored truncation was requested."""


class LSeries:
    """Adjusted-cumulant coefficient series: per index r, a truncated power
    series in 1/n.

    ``rows`` maps r to the list [c_{r,0}, c_{r,1}, ...]; all rows share the
    truncation ``order`` (inclusive highest power of 1/n).  For standardized
    estimates the coefficients are c_{r,j} = A_{r, r+j-delta}/r! with
    delta = 1 for r >= 3 — the caller builds them; this class only stores
    and multiplies.
    """

    __slots__ = ("rows", "order")

    def __init__(self, rows, order):
        self.order = int(order)
        self.rows = {}
        for r, coeffs in rows.items():
            coeffs = list(coeffs)
            if len(coeffs) < self.order + 1:
                raise TruncationError(
                    f"series for index {r} has {len(coeffs)} coefficients, "
                    f"needs {self.order + 1}"
                )
            self.rows[int(r)] = coeffs[: self.order + 1]

    def coeff(self, r, j):
        if j > self.order:
            raise TruncationError(f"coefficient n^-{j} beyond truncation {self.order}")
        try:
            return self.rows[r][j]
        except KeyError:
            raise SeqLengthError(f"no series stored for index {r}") from None

    def leading(self):
        """The plain sequence of leading coefficients L_0."""
        top = max(self.rows) if self.rows else 0
        return Seq([self.rows.get(r, [0])[0] if r in self.rows else 0
                    for r in range(1, top + 1)])


def _series_mul(a, b, order):
    out = [0] * (order + 1)
    for i, ai in enumerate(a):
        if isinstance(ai, (int, float, Fraction)) and not ai:
            continue
        for j, bj in enumerate(b):
            if i + j > order:
                break
            out[i + j] = out[i + j] + ai * bj
    return out


def bracket_series_coeff(pi, L, i):
    """The n^-i coefficient of [pi] when every L_k is a truncated series.

    Multiplies the truncated series prod_k L_k(n)^{i_k}, divides by the
    bracket normalizer, and returns the requested coefficient.
    """
    if i < 0:
        raise ValueError("series order must be nonnegative")
    if i > L.order:
        raise TruncationError(f"n^-{i} requested beyond truncation {L.order}")
    acc = [Fraction(1)] + [0] * i
    for part, mult in pi.items():
        row = [L.coeff(part, j) for j in range(i + 1)]
        for _ in range(mult):
            acc = _series_mul(acc, row, i)
    return acc[i] * Fraction(1, pi.norm)
