"""Exact max-plus (tropical) scalars and sparse matrices.

The semiring: "plus" is max, "times" is ordinary addition, the additive
identity is the bottom element (minus infinity, written "." or "-inf" in
text formats) and the multiplicative identity is 0.  Every finite value is
an exact rational, stored as a plain int whenever it is integral.  Floats
are rejected on input so all results stay bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class DimensionMismatchError(ValueError):
    """Incompatible matrix or vector shapes."""


class PositiveCircuitError(ValueError):
    """Kleene star requested for a graph containing a positive-weight circuit."""


def denominator_of(v) -> int:
    """Denominator of an exact value (1 for ints)."""
    return 1 if isinstance(v, int) else v.denominator


def scaled_int(v, scale) -> int:
    """v * scale as an int; ``scale`` must clear v's denominator."""
    if isinstance(v, int):
        return v * scale
    num = v.numerator * scale
    q, r = divmod(num, v.denominator)
    if r:
        raise ValueError("scale does not clear the denominator")
    return q


def as_value(x):
    """Normalize a finite entry: ints stay ints, integral Fractions collapse to int."""
    if isinstance(x, bool):
        raise TypeError("bool is not a max-plus value")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    if isinstance(x, TropicalScalar):
        if x.is_epsilon:
            raise ValueError("the bottom element is not a finite value")
        return x.value
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class TropicalScalar:
    """One max-plus value: an exact rational, or the bottom element.

    ``TropicalScalar(x)`` wraps a finite value; ``TropicalScalar(None)`` is
    the bottom element (the additive identity, absorbing under otimes).
    """

    __slots__ = ("_v",)

    def __init__(self, value=None):
        self._v = None if value is None else as_value(value)

    @property
    def is_epsilon(self) -> bool:
        return self._v is None

    @property
    def value(self):
        """The finite rational, or None for the bottom element."""
        return self._v

    def oplus(self, other: "TropicalScalar") -> "TropicalScalar":
        """Max of the two values; the bottom element is neutral."""
        if self._v is None:
            return other
        if other._v is None:
            return self
        return TropicalScalar(self._v if self._v >= other._v else other._v)

    def otimes(self, other: "TropicalScalar") -> "TropicalScalar":
        """Sum of the two values; the bottom element is absorbing."""
        if self._v is None or other._v is None:
            return EPSILON
        return TropicalScalar(self._v + other._v)

    def _key(self):
        # Total order with the bottom element strictly below every rational.
        return (0,) if self._v is None else (1, self._v)

    def __eq__(self, other):
        if not isinstance(other, TropicalScalar):
            return NotImplemented
        return self._v == other._v

    def __lt__(self, other):
        return self._key() < other._key()

    def __le__(self, other):
        return self._key() <= other._key()

    def __gt__(self, other):
        return self._key() > other._key()

    def __ge__(self, other):
        return self._key() >= other._key()

    def __hash__(self):
        return hash(self._v)

    def __repr__(self):
        return "TropicalScalar(eps)" if self._v is None else f"TropicalScalar({self._v!r})"

    def __str__(self):
        return "-inf" if self._v is None else str(self._v)


EPSILON = TropicalScalar(None)
UNIT = TropicalScalar(0)


def _check_labels(labels, count, what):
    if labels is None:
        return None
    labels = tuple(labels)
    if len(labels) != count:
        raise ValueError(f"{what} labels must have length {count}")
    if any(labels[i] >= labels[i + 1] for i in range(len(labels) - 1)):
        raise ValueError(f"{what} labels must be strictly increasing")
    return labels


class TropicalMatrix:
    """Sparse max-plus matrix; entries absent from the map are the bottom element.

    ``entries`` maps ``(row, col)`` to a finite exact rational.  Optional
    row/col labels carry original node indices through submatrix extraction,
    so factors built from a submatrix can be placed back in the coordinates
    of the parent matrix.  Instances are treated as immutable; operations
    return new matrices.
    """

    __slots__ = ("rows", "cols", "entries", "row_labels", "col_labels")

    def __init__(self, rows, cols, entries, row_labels=None, col_labels=None):
        if rows <= 0 or cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), v in entries.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"entry index ({i}, {j}) out of range")
            clean[(i, j)] = as_value(v)
        self.entries = clean
        self.row_labels = _check_labels(row_labels, rows, "row")
        self.col_labels = _check_labels(col_labels, cols, "col")

    @classmethod
    def from_rows(cls, rows, row_labels=None, col_labels=None):
        """Build from a dense list of lists; None marks the bottom element."""
        if not rows or not rows[0]:
            raise ValueError("from_rows needs at least one row and one column")
        ncols = len(rows[0])
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                if v is None or (isinstance(v, TropicalScalar) and v.is_epsilon):
                    continue
                entries[(i, j)] = v
        return cls(len(rows), ncols, entries, row_labels, col_labels)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 0 for i in range(n)})

    @classmethod
    def epsilon(cls, rows, cols=None):
        """The all-bottom matrix (the additive identity)."""
        return cls(rows, rows if cols is None else cols, {})

    def get(self, i, j):
        """Raw entry: a finite value, or None for the bottom element."""
        return self.entries.get((i, j))

    def entry(self, i, j) -> TropicalScalar:
        v = self.entries.get((i, j))
        return EPSILON if v is None else TropicalScalar(v)

    def to_rows(self):
        out = [[None] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    @property
    def finite_count(self) -> int:
        return len(self.entries)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def row_label(self, i):
        return i if self.row_labels is None else self.row_labels[i]

    def col_label(self, j):
        return j if self.col_labels is None else self.col_labels[j]

    def submatrix(self, keep_rows, keep_cols=None):
        """Restriction to the given row/col positions; labels follow along."""
        keep_rows = sorted(keep_rows)
        keep_cols = keep_rows if keep_cols is None else sorted(keep_cols)
        rpos = {r: k for k, r in enumerate(keep_rows)}
        cpos = {c: k for k, c in enumerate(keep_cols)}
        entries = {
            (rpos[i], cpos[j]): v
            for (i, j), v in self.entries.items()
            if i in rpos and j in cpos
        }
        return TropicalMatrix(
            len(keep_rows),
            len(keep_cols),
            entries,
            tuple(self.row_label(r) for r in keep_rows),
            tuple(self.col_label(c) for c in keep_cols),
        )

    def transpose(self):
        return TropicalMatrix(
            self.cols,
            self.rows,
            {(j, i): v for (i, j), v in self.entries.items()},
            self.col_labels,
            self.row_labels,
        )

    def __eq__(self, other):
        # Labels are bookkeeping, not part of the value.
        if not isinstance(other, TropicalMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"TropicalMatrix({self.rows}x{self.cols}, {self.finite_count} finite)"


def matrix_add(a: TropicalMatrix, b: TropicalMatrix) -> TropicalMatrix:
    """Entrywise max; an entry stays bottom only when both inputs are bottom there."""
    if a.rows != b.rows or a.cols != b.cols:
        raise DimensionMismatchError(f"{a.rows}x{a.cols} vs {b.rows}x{b.cols}")
    entries = dict(a.entries)
    for key, v in b.entries.items():
        cur = entries.get(key)
        if cur is None or v > cur:
            entries[key] = v
    return TropicalMatrix(a.rows, a.cols, entries)


def matrix_mul(a: TropicalMatrix, b: TropicalMatrix) -> TropicalMatrix:
    """Max-plus product: out[i][j] = max_k a[i][k] + b[k][j]."""
    if a.cols != b.rows:
        raise DimensionMismatchError(f"{a.rows}x{a.cols} times {b.rows}x{b.cols}")
    b_rows = [[] for _ in range(b.rows)]
    for (k, j), v in b.entries.items():
        b_rows[k].append((j, v))
    out = {}
    for (i, k), av in a.entries.items():
        for j, bv in b_rows[k]:
            key = (i, j)
            cand = av + bv
            cur = out.get(key)
            if cur is None or cand > cur:
                out[key] = cand
    return TropicalMatrix(a.rows, b.cols, out)


def matrix_power(a: TropicalMatrix, t) -> TropicalMatrix:
    """t-th max-plus power by binary exponentiation; the 0th power is the identity.

    Entry (i, j) of the result is the maximum weight over i-j paths of
    length exactly t in the associated digraph.
    """
    if not a.is_square:
        raise DimensionMismatchError("matrix power needs a square matrix")
    if not isinstance(t, int) or t < 0:
        raise ValueError("exponent must be a nonnegative integer")
    result = TropicalMatrix.identity(a.rows)
    base = a
    while t:
        if t & 1:
            result = matrix_mul(result, base)
        t >>= 1
        if t:
            base = matrix_mul(base, base)
    return result


def kleene_star(a: TropicalMatrix) -> TropicalMatrix:
    """All-pairs maximum path weight, including empty paths on the diagonal.

    Computed as an algebraic-path closure (Floyd-Warshall over max-plus).
    Requires that no circuit has positive weight; otherwise the series
    diverges and PositiveCircuitError is raised.
    """
    if not a.is_square:
        raise DimensionMismatchError("Kleene star needs a square matrix")
    n = a.rows
    dist = [[None] * n for _ in range(n)]
    for (i, j), v in a.entries.items():
        dist[i][j] = v
    for k in range(n):
        row_k = dist[k]
        for i in range(n):
            d_ik = dist[i][k]
            if d_ik is None:
                continue
            row_i = dist[i]
            for j in range(n):
                d_kj = row_k[j]
                if d_kj is None:
                    continue
                cand = d_ik + d_kj
                cur = row_i[j]
                if cur is None or cand > cur:
                    row_i[j] = cand
    for v in range(n):
        if dist[v][v] is not None and dist[v][v] > 0:
            raise PositiveCircuitError(
                "graph has a positive-weight circuit (maximum cycle mean > 0)"
            )
    entries = {}
    for i in range(n):
        for j in range(n):
            v = dist[i][j]
            if i == j:
                v = 0 if v is None or v < 0 else v
            if v is not None:
                entries[(i, j)] = v
    return TropicalMatrix(n, n, entries)


@dataclass(frozen=True, slots=True)
class DiagonalScaling:
    """A finite scaling vector d, used as conjugation diag(-d) . A . diag(d)."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_value(v) for v in self.values))

    @classmethod
    def zeros(cls, n):
        return cls((0,) * n)

    def __len__(self):
        return len(self.values)

    def inverse(self) -> "DiagonalScaling":
        return DiagonalScaling(tuple(-v for v in self.values))


def diag_conjugate(a: TropicalMatrix, d: DiagonalScaling, shift=0) -> TropicalMatrix:
    """Conjugation with a uniform shift: entry (i, j) becomes -d_i + (a_ij + shift) + d_j.

    Conjugating by d and then by its inverse restores the matrix; diagonal
    entries only pick up the shift.  Labels of the input are preserved.
    """
    if a.rows != a.cols or len(d) != a.rows:
        raise DimensionMismatchError("scaling length must equal the matrix order")
    shift = as_value(shift)
    dv = d.values
    entries = {
        (i, j): -dv[i] + (v + shift) + dv[j] for (i, j), v in a.entries.items()
    }
    return TropicalMatrix(a.rows, a.cols, entries, a.row_labels, a.col_labels)
