"""Exact arithmetic substrate: rationals, partitions, compositions, dense
exact matrices, Jordan types and univariate linear forms.

Nothing in this package touches floating point.  Matrices hold Python ints
or ``fractions.Fraction`` values; a Fraction with denominator 1 is stored as
an int so that integer matrices compare equal regardless of how they were
produced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]
Partition = tuple[int, ...]
Composition = tuple[int, ...]


# ----------------------------------------------------------------------------
# rationals
# ----------------------------------------------------------------------------

def as_rational(value: Scalar | str) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; anything else raises ValueError."""
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def format_rational(value: Scalar) -> str:
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _normalize(value: Scalar) -> Scalar:
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"matrix entries must be int or Fraction, got {type(value).__name__}")
    return value


# ----------------------------------------------------------------------------
# partitions and compositions
# ----------------------------------------------------------------------------

def as_partition(parts: Iterable[int]) -> Partition:
    """Validate and sort parts into a partition (weakly decreasing, positive)."""
    out = tuple(int(p) for p in parts)
    if any(p <= 0 for p in out):
        raise ValueError(f"partition parts must be positive: {out}")
    return tuple(sorted(out, reverse=True))


def as_composition(parts: Iterable[int]) -> Composition:
    out = tuple(int(p) for p in parts)
    if any(p < 0 for p in out):
        raise ValueError(f"composition parts must be non-negative: {out}")
    return out


def parse_partition_text(text: str) -> Partition:
    """Read the comma-separated text form, e.g. ``"4,2,2,1"``."""
    pieces = [piece.strip() for piece in text.split(",")]
    if not pieces or any(not piece for piece in pieces):
        raise ValueError(f"malformed partition text: {text!r}")
    try:
        values = [int(piece) for piece in pieces]
    except ValueError as exc:
        raise ValueError(f"malformed partition text: {text!r}") from exc
    part = as_partition(values)
    if list(part) != values:
        raise ValueError(f"partition parts must be weakly decreasing: {text!r}")
    return part


def format_partition(p: Sequence[int]) -> str:
    return ",".join(str(x) for x in p)


def partitions_of(size: int, largest: int | None = None) -> Iterator[Partition]:
    """All partitions of ``size`` in reverse lexicographic order."""
    if largest is None:
        largest = size
    if size == 0:
        yield ()
        return
    for first in range(min(size, largest), 0, -1):
        for rest in partitions_of(size - first, first):
            yield (first,) + rest


def conjugate_partition(p: Sequence[int]) -> Partition:
    if not p:
        return ()
    return tuple(sum(1 for x in p if x > j) for j in range(p[0]))


def dominance_leq(p: Sequence[int], q: Sequence[int]) -> bool:
    """True iff every partial sum of ``p`` is at most that of ``q``."""
    if sum(p) != sum(q):
        raise ValueError(f"dominance needs equal sizes, got {sum(p)} and {sum(q)}")
    length = max(len(p), len(q))
    sp = sq = 0
    for j in range(length):
        sp += p[j] if j < len(p) else 0
        sq += q[j] if j < len(q) else 0
        if sp > sq:
            return False
    return True


# ----------------------------------------------------------------------------
# matrices
# ----------------------------------------------------------------------------

class Matrix:
    """Immutable dense matrix over the rationals.

    Indices are 0-based throughout the API.
    """

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, entries: Sequence[Sequence[Scalar]], cols: int | None = None):
        data = tuple(tuple(_normalize(x) for x in row) for row in entries)
        width = len(data[0]) if data else (cols or 0)
        if cols is not None and data and width != cols:
            raise ValueError("column count does not match entries")
        if any(len(row) != width for row in data):
            raise ValueError("ragged matrix rows")
        self.rows = len(data)
        self.cols = width
        self._data = data
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def unit(cls, n: int, i: int, j: int, cols: int | None = None) -> "Matrix":
        """The elementary matrix with a single 1 at (i, j)."""
        cols = n if cols is None else cols
        grid = [[0] * cols for _ in range(n)]
        grid[i][j] = 1
        return cls(grid, cols=cols)

    @classmethod
    def from_positions(cls, n: int, positions: Iterable[tuple[int, int]], value: Scalar = 1) -> "Matrix":
        grid = [[0] * n for _ in range(n)]
        for i, j in positions:
            grid[i][j] = value
        return cls(grid, cols=n)

    @classmethod
    def permutation(cls, images: Sequence[int]) -> "Matrix":
        """Permutation matrix P with P e_j = e_{images[j]}."""
        n = len(images)
        if sorted(images) != list(range(n)):
            raise ValueError(f"not a permutation: {images}")
        grid = [[0] * n for _ in range(n)]
        for j, i in enumerate(images):
            grid[i][j] = 1
        return cls(grid, cols=n)

    @classmethod
    def block_diagonal(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        grid = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    grid[r0 + i][c0 + j] = b._data[i][j]
            r0 += b.rows
            c0 += b.cols
        return cls(grid, cols=cols)

    @classmethod
    def from_blocks(cls, row_sizes: Sequence[int], col_sizes: Sequence[int],
                    blocks: dict[tuple[int, int], "Matrix"]) -> "Matrix":
        """Assemble from a sparse grid of blocks; missing blocks are zero."""
        row_off = _offsets(row_sizes)
        col_off = _offsets(col_sizes)
        grid = [[0] * sum(col_sizes) for _ in range(sum(row_sizes))]
        for (bi, bj), block in blocks.items():
            if (block.rows, block.cols) != (row_sizes[bi], col_sizes[bj]):
                raise ValueError(f"block ({bi},{bj}) has shape {block.shape}, "
                                 f"expected {(row_sizes[bi], col_sizes[bj])}")
            for i in range(block.rows):
                for j in range(block.cols):
                    grid[row_off[bi] + i][col_off[bj] + j] = block._data[i][j]
        return cls(grid, cols=sum(col_sizes))

    # basic protocol ------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: tuple[int, int]) -> Scalar:
        i, j = index
        return self._data[i][j]

    def row(self, i: int) -> tuple[Scalar, ...]:
        return self._data[i]

    def tolist(self) -> list[list[Scalar]]:
        return [list(row) for row in self._data]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in row) for row in self._data)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def pretty(self) -> str:
        cells = [[format_rational(x) for x in row] for row in self._data]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)

    # arithmetic ---------------------------------------------------------------
    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                      cols=self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                      cols=self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self._data], cols=self.cols)

    def scale(self, c: Scalar) -> "Matrix":
        return Matrix([[c * a for a in r] for r in self._data], cols=self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols_of_other = list(zip(*other._data)) if other.rows else [()] * other.cols
        out = []
        for r in self._data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append([sum((a * col[k] for k, a in nz), 0) for col in cols_of_other])
        return Matrix(out, cols=other.cols)

    def transpose(self) -> "Matrix":
        return Matrix([list(col) for col in zip(*self._data)] if self.rows else [],
                      cols=self.rows)

    def commutator(self, other: "Matrix") -> "Matrix":
        return self @ other - other @ self

    def power(self, k: int) -> "Matrix":
        if not self.is_square:
            raise ValueError("power of a non-square matrix")
        out = Matrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def trace(self) -> Scalar:
        return _normalize(sum((self._data[i][i] for i in range(min(self.shape))), 0))

    def is_zero(self) -> bool:
        return all(not a for row in self._data for a in row)

    def support(self) -> frozenset[tuple[int, int]]:
        """Positions of the nonzero entries."""
        return frozenset((i, j) for i, row in enumerate(self._data) for j, a in enumerate(row) if a)

    def is_integral(self) -> bool:
        return all(isinstance(a, int) for row in self._data for a in row)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        return Matrix([[self._data[i][j] for j in col_idx] for i in row_idx], cols=len(col_idx))

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    # linear algebra -----------------------------------------------------------
    def rank(self) -> int:
        return rank(self)

    def inverse(self) -> "Matrix":
        return inverse(self)

    # text format --------------------------------------------------------------
    def to_text(self) -> str:
        if not self.is_integral():
            raise ValueError("the matrix file format holds integers only")
        lines = [f"{self.rows} {self.cols}"]
        lines.extend(" ".join(str(a) for a in row) for row in self._data)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Matrix":
        """Read ``rows cols`` followed by row-major integers."""
        tokens = text.split()
        if len(tokens) < 2:
            raise ValueError("matrix text needs a 'rows cols' header")
        try:
            values = [int(t) for t in tokens]
        except ValueError as exc:
            raise ValueError("matrix text must contain integers only") from exc
        rows, cols = values[0], values[1]
        if rows <= 0 or cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        body = values[2:]
        if len(body) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, found {len(body)}")
        return cls([body[i * cols:(i + 1) * cols] for i in range(rows)], cols=cols)


def _offsets(sizes: Sequence[int]) -> list[int]:
    out, acc = [], 0
    for s in sizes:
        out.append(acc)
        acc += s
    return out


def block_offsets(sizes: Sequence[int]) -> list[int]:
    """Starting index of each block in a block division."""
    return _offsets(sizes)


def rank(a: Matrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    grid: list[list[int]] = []
    for row in a._data:
        denom = lcm(*(x.denominator for x in row if isinstance(x, Fraction))) if any(
            isinstance(x, Fraction) for x in row) else 1
        grid.append([int(x * denom) for x in row])
    rows, cols = a.rows, a.cols
    r = 0
    prev = 1
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if grid[i][c] != 0), None)
        if pivot is None:
            continue
        grid[r], grid[pivot] = grid[pivot], grid[r]
        p = grid[r][c]
        for i in range(r + 1, rows):
            gi = grid[i]
            gr = grid[r]
            f = gi[c]
            for j in range(c + 1, cols):
                gi[j] = (p * gi[j] - f * gr[j]) // prev
            gi[c] = 0
        prev = p
        r += 1
        if r == rows:
            break
    return r


def inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse over Q; raises ValueError on singular input."""
    if not a.is_square:
        raise ValueError("inverse of a non-square matrix")
    n = a.rows
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(a._data)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if work[i][c] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        work[c], work[pivot] = work[pivot], work[c]
        p = work[c][c]
        work[c] = [x / p for x in work[c]]
        for i in range(n):
            if i != c and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[c])]
    return Matrix([row[n:] for row in work], cols=n)


def conjugate(n: Matrix, g: Matrix) -> Matrix:
    """g N g^{-1}."""
    return g @ n @ inverse(g)


def nullspace(a: Matrix) -> list[tuple[Fraction, ...]]:
    """Basis of {v : a v = 0}, one vector per free column of the reduced form."""
    rows, cols = a.rows, a.cols
    work = [[Fraction(x) for x in row] for row in a._data]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        p = work[r][c]
        work[r] = [x / p for x in work[r]]
        for i in range(rows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        v = [Fraction(0)] * cols
        v[free] = Fraction(1)
        for row_index, pc in enumerate(pivots):
            v[pc] = -work[row_index][free]
        basis.append(tuple(v))
    return basis


def rank_sequence(n: Matrix) -> list[int]:
    """Ranks of N^0, N^1, ... up to and including the first zero power.

    Raises ValueError when N is not nilpotent.
    """
    if not n.is_square:
        raise ValueError("rank sequence needs a square matrix")
    size = n.rows
    ranks = [size]
    power = Matrix.identity(size)
    for _ in range(size):
        if ranks[-1] == 0:
            break
        power = power @ n
        ranks.append(rank(power))
    if ranks[-1] != 0:
        raise ValueError("matrix is not nilpotent")
    return ranks


def jordan_partition(n: Matrix) -> Partition:
    """Jordan type of a nilpotent matrix from its rank sequence."""
    ranks = rank_sequence(n)
    at_least = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]
    return conjugate_partition(at_least)


# ----------------------------------------------------------------------------
# linear forms
# ----------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class LinearForm:
    """constant + slope * s for a single symbol s."""

    slope: Fraction
    constant: Fraction

    def __init__(self, constant: Scalar | str = 0, slope: Scalar | str = 0):
        object.__setattr__(self, "constant", as_rational(constant))
        object.__setattr__(self, "slope", as_rational(slope))

    def __call__(self, s: Scalar) -> Fraction:
        return self.constant + self.slope * Fraction(s)

    def __add__(self, other: "LinearForm | Scalar") -> "LinearForm":
        if isinstance(other, LinearForm):
            return LinearForm(self.constant + other.constant, self.slope + other.slope)
        return LinearForm(self.constant + Fraction(other), self.slope)

    def __sub__(self, other: "LinearForm | Scalar") -> "LinearForm":
        if isinstance(other, LinearForm):
            return LinearForm(self.constant - other.constant, self.slope - other.slope)
        return LinearForm(self.constant - Fraction(other), self.slope)

    def __neg__(self) -> "LinearForm":
        return LinearForm(-self.constant, -self.slope)

    def scale(self, c: Scalar) -> "LinearForm":
        return LinearForm(self.constant * c, self.slope * c)

    def is_zero(self) -> bool:
        return self.constant == 0 and self.slope == 0

    def root(self) -> Fraction | None:
        """The unique zero, or None when the form is constant."""
        if self.slope == 0:
            return None
        return -self.constant / self.slope

    def render(self, symbol: str = "s") -> str:
        parts = []
        if self.slope:
            if self.slope == 1:
                parts.append(symbol)
            elif self.slope == -1:
                parts.append(f"-{symbol}")
            else:
                parts.append(f"{format_rational(self.slope)}{symbol}")
        if self.constant or not parts:
            c = self.constant
            if parts:
                parts.append(f"{'-' if c < 0 else '+'} {format_rational(abs(c))}")
            else:
                parts.append(format_rational(c))
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()


# ----------------------------------------------------------------------------
# block permutations
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockPermutation:
    """A permutation of blocks: block j of the source lands at slot image[j].

    Both ``image`` and the matrix produced by :meth:`matrix` are 0-based.
    """

    block_sizes: Composition
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.block_sizes) != len(self.image):
            raise ValueError("one image per block is required")
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f"image is not a bijection: {self.image}")

    def inverse(self) -> "BlockPermutation":
        inv = [0] * len(self.image)
        for j, i in enumerate(self.image):
            inv[i] = j
        return BlockPermutation(tuple(self.block_sizes[j] for j in inv), tuple(inv))

    def inversions(self) -> list[tuple[int, int]]:
        img = self.image
        return [(i, j) for i in range(len(img)) for j in range(i + 1, len(img)) if img[i] > img[j]]

    def matrix(self) -> Matrix:
        """Matrix sending the coordinates of block j to the slot image[j]."""
        target_sizes = [0] * len(self.image)
        for j, i in enumerate(self.image):
            target_sizes[i] = self.block_sizes[j]
        target_off = _offsets(target_sizes)
        source_off = _offsets(self.block_sizes)
        images = [0] * sum(self.block_sizes)
        for j, i in enumerate(self.image):
            for t in range(self.block_sizes[j]):
                images[source_off[j] + t] = target_off[i] + t
        return Matrix.permutation(images)
