"""Partition-indexed unipotent data: torus weights, radical block division,
root sets, the nilpotent support matrix of the generic character, its
stabilizer, the Heisenberg polarization and Whittaker-pair utilities.

Conventions.  A character of a unipotent group V is stored as a support
matrix A with psi(v) = psi(tr(A (v - I))).  Root positions are 0-based
pairs (i, j) meaning the matrix entry in row i, column j.  A partition p
with largest part 2k or 2k-1 is encoded by vectors m = (m_1..m_k) and
n = (n_1..n_k), where part 2j has multiplicity m_j - m_{j+1} and part
2j-1 has multiplicity n_j - n_{j+1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import (
    Composition,
    Matrix,
    Partition,
    as_partition,
    block_offsets,
    inverse,
    nullspace,
    rank,
    rank_sequence,
)

RootSet = frozenset  # frozenset[tuple[int, int]]


@dataclass(frozen=True)
class OrbitPartitionData:
    k: int
    m: tuple[int, ...]
    n: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 1 or len(self.m) != self.k or len(self.n) != self.k:
            raise ValueError("m and n must both have length k >= 1")
        for seq in (self.m, self.n):
            if any(a < b for a, b in zip(seq, seq[1:])) or any(x < 0 for x in seq):
                raise ValueError(f"not a weakly decreasing non-negative vector: {seq}")
        if self.m[-1] + self.n[-1] < 1:
            raise ValueError("m_k + n_k must be positive")

    def m_at(self, j: int) -> int:
        """m_j for 1-based j, zero outside 1..k."""
        return self.m[j - 1] if 1 <= j <= self.k else 0

    def n_at(self, j: int) -> int:
        return self.n[j - 1] if 1 <= j <= self.k else 0

    def partition(self) -> Partition:
        parts: list[int] = []
        for j in range(self.k, 0, -1):
            parts += [2 * j] * (self.m_at(j) - self.m_at(j + 1))
            parts += [2 * j - 1] * (self.n_at(j) - self.n_at(j + 1))
        return as_partition(parts)


@dataclass(frozen=True)
class WhittakerPair:
    """A weight vector h (diagonal torus datum) and a nilpotent alpha of weight -2."""

    weights: tuple[int, ...]
    alpha: Matrix

    def __post_init__(self) -> None:
        if self.alpha.shape != (len(self.weights), len(self.weights)):
            raise ValueError("alpha must be square of the same size as the weights")
        bad = [(i, j) for i, j in self.alpha.support() if self.weights[i] - self.weights[j] != -2]
        if bad:
            raise ValueError(f"alpha has entries off the weight -2 space: {sorted(bad)}")


@dataclass(frozen=True)
class SL2Triple:
    """alpha, h, beta with [h, alpha] = -2 alpha, [h, beta] = 2 beta, [beta, alpha] = h."""

    alpha: Matrix
    h: Matrix
    beta: Matrix

    def relations_hold(self) -> bool:
        a, h, b = self.alpha, self.h, self.beta
        return (h.commutator(a) == a.scale(-2)
                and h.commutator(b) == b.scale(2)
                and b.commutator(a) == h)

    def whittaker_pair(self) -> WhittakerPair:
        """The pair (diag h, alpha); requires h to be diagonal with integer entries."""
        n = self.h.rows
        if any(self.h[i, j] for i in range(n) for j in range(n) if i != j):
            raise ValueError("neutral element is not diagonal in this basis")
        return WhittakerPair(tuple(int(self.h[i, i]) for i in range(n)), self.alpha)


# ----------------------------------------------------------------------------
# partition bookkeeping
# ----------------------------------------------------------------------------

def parse_partition(p: Sequence[int]) -> OrbitPartitionData:
    p = as_partition(p)
    if not p:
        raise ValueError("empty partition")
    k = (p[0] + 1) // 2
    mult = {a: p.count(a) for a in set(p)}
    m = [0] * (k + 2)
    n = [0] * (k + 2)
    for j in range(k, 0, -1):
        m[j] = m[j + 1] + mult.get(2 * j, 0)
        n[j] = n[j + 1] + mult.get(2 * j - 1, 0)
    return OrbitPartitionData(k, tuple(m[1:k + 1]), tuple(n[1:k + 1]))


def torus_weights(p: Sequence[int]) -> tuple[int, ...]:
    """Exponents of the one-parameter torus, in descending order."""
    p = as_partition(p)
    exps = [a - 1 - 2 * t for a in p for t in range(a)]
    return tuple(sorted(exps, reverse=True))


def radical_composition(p: Sequence[int]) -> Composition:
    """(m_k, n_k, ..., m_1, n_1, m_1, n_2, m_2, ..., n_k, m_k), zeros kept.

    Block b (0-based) of this division carries torus weight 2k - 1 - b.
    """
    d = parse_partition(p)
    left: list[int] = []
    for j in range(d.k, 0, -1):
        left += [d.m_at(j), d.n_at(j)]
    right = [d.m_at(1)]
    for j in range(2, d.k + 1):
        right += [d.n_at(j), d.m_at(j)]
    return tuple(left + right)


def nonzero_parts(c: Sequence[int]) -> Composition:
    return tuple(x for x in c if x)


def gap_positions(weights: Sequence[int], gap: int) -> RootSet:
    n = len(weights)
    return frozenset((i, j) for i in range(n) for j in range(n) if weights[i] - weights[j] >= gap)


def root_sets(p: Sequence[int]) -> tuple[RootSet, RootSet]:
    """Positions of N_p (weight gap >= 1) and of N^2_p (weight gap >= 2)."""
    w = torus_weights(p)
    return gap_positions(w, 1), gap_positions(w, 2)


def support_matrix(p: Sequence[int]) -> Matrix:
    """The lower nilpotent 0/1 matrix alpha_p of the generic character.

    Consecutive same-parity blocks b and b+2 of the radical division are
    joined by a truncated identity matching their leading coordinates.
    """
    comp = radical_composition(p)
    off = block_offsets(comp)
    size = sum(comp)
    positions = []
    for b in range(len(comp) - 2):
        for a in range(min(comp[b], comp[b + 2])):
            positions.append((off[b + 2] + a, off[b] + a))
    return Matrix.from_positions(size, positions)


def stabilizer_shape(p: Sequence[int]) -> list[int]:
    """Sizes of the general linear factors of the stabilizer of the character."""
    d = parse_partition(p)
    sizes = []
    for j in range(d.k, 0, -1):
        sizes.append(d.m_at(j) - d.m_at(j + 1))
        sizes.append(d.n_at(j) - d.n_at(j + 1))
    return [s for s in sizes if s]


def stabilizer_factors(p: Sequence[int]) -> list[tuple[str, int, int]]:
    """(kind, level j, size) for every nonzero factor, in stabilizer_shape order."""
    d = parse_partition(p)
    out = []
    for j in range(d.k, 0, -1):
        for kind, vec in (("m", d.m_at), ("n", d.n_at)):
            size = vec(j) - vec(j + 1)
            if size:
                out.append((kind, j, size))
    return out


def stabilizer_embedding(p: Sequence[int], factor: int, g: Matrix) -> Matrix:
    """Embed g into the stabilizer factor number ``factor``.

    The factor for part 2j (kind "m") acts by g on coordinates
    m_{j+1}..m_j - 1 of every m_t block with t <= j, and trivially elsewhere;
    odd parts are handled the same way on the n blocks.
    """
    d = parse_partition(p)
    kind, j, size = stabilizer_factors(p)[factor]
    if g.shape != (size, size):
        raise ValueError(f"factor {factor} has size {size}, got {g.shape}")
    comp = radical_composition(p)
    off = block_offsets(comp)
    vec = d.m_at if kind == "m" else d.n_at
    lo = vec(j + 1)
    # even-indexed blocks of the radical division are m blocks, odd ones n blocks
    targets = []
    for b, c in enumerate(comp):
        is_m = b % 2 == 0
        if is_m != (kind == "m"):
            continue
        if c >= vec(j):
            targets.append(off[b] + lo)
    total = sum(comp)
    grid = Matrix.identity(total).tolist()
    for start in targets:
        for a in range(size):
            for bcol in range(size):
                grid[start + a][start + bcol] = g[a, bcol]
    return Matrix(grid, cols=total)


def heisenberg_dim(p: Sequence[int]) -> int:
    d = parse_partition(p)
    return (sum(d.m_at(i) * d.n_at(i) for i in range(1, d.k + 1))
            + sum(d.m_at(i - 1) * d.n_at(i) for i in range(2, d.k + 1)))


def _block_pair_positions(comp: Sequence[int], first: int) -> RootSet:
    off = block_offsets(comp)
    out = set()
    for b in range(first, len(comp) - 1, 2):
        for i in range(comp[b]):
            for j in range(comp[b + 1]):
                out.add((off[b] + i, off[b + 1] + j))
    return frozenset(out)


def polarization(p: Sequence[int]) -> tuple[RootSet, RootSet]:
    """X_p (block pairs (1,2), (3,4), ...) and Y_p (block pairs (2,3), (4,5), ...)."""
    comp = radical_composition(p)
    return _block_pair_positions(comp, 0), _block_pair_positions(comp, 1)


def symplectic_pair(p: Sequence[int], x: Matrix, y: Matrix) -> Fraction:
    """tr(alpha_p [x - I, y - I]) for unipotent x, y."""
    alpha = support_matrix(p)
    ident = Matrix.identity(alpha.rows)
    return Fraction((alpha @ (x - ident).commutator(y - ident)).trace())


def pairing_matrix(p: Sequence[int]) -> tuple[list[tuple[int, int]], list[tuple[int, int]], Matrix]:
    """Pairing values on basis elements I + E_x, I + E_y of X_p and Y_p."""
    xs, ys = (sorted(s) for s in polarization(p))
    alpha = support_matrix(p)
    size = alpha.rows
    grid = []
    for x in xs:
        ex = Matrix.unit(size, *x)
        grid.append([(alpha @ ex.commutator(Matrix.unit(size, *y))).trace() for y in ys])
    return xs, ys, Matrix(grid, cols=len(ys))


def positions_commute(positions: RootSet) -> bool:
    """True iff the elementary matrices at these positions pairwise commute."""
    rows = {i for i, _ in positions}
    cols = {j for _, j in positions}
    return not (rows & cols)


# ----------------------------------------------------------------------------
# Whittaker pairs
# ----------------------------------------------------------------------------

def jordan_chains(alpha: Matrix) -> list[list[tuple[Fraction, ...]]]:
    """Jordan chains v, alpha v, alpha^2 v, ... of a nilpotent matrix.

    Chains are produced longest first; within one length, chain heads are
    taken from the kernel basis of alpha^j in index order.
    """
    ranks = rank_sequence(alpha)
    size = alpha.rows
    depth = len(ranks) - 1
    powers = [Matrix.identity(size)]
    for _ in range(depth):
        powers.append(powers[-1] @ alpha)

    def apply(mat: Matrix, v: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        return tuple(sum((mat[i, j] * v[j] for j in range(size) if v[j]), Fraction(0))
                     for i in range(size))

    chains: list[list[tuple[Fraction, ...]]] = []
    for length in range(depth, 0, -1):
        lower = [tuple(Fraction(x) for x in v) for v in nullspace(powers[length - 1])]
        span = list(lower)
        for chain in chains:
            span.extend(chain[len(chain) - length:])
        current = rank(Matrix(span, cols=size)) if span else 0
        for cand in nullspace(powers[length]):
            if rank(Matrix(span + [cand], cols=size)) == current + 1:
                chain = [cand]
                for _ in range(length - 1):
                    chain.append(apply(alpha, chain[-1]))
                chains.append(chain)
                span.extend(chain)
                current = rank(Matrix(span, cols=size))
    return chains


def neutral_completion(alpha: Matrix) -> SL2Triple:
    """Complete a nilpotent alpha to an sl2-triple (alpha, h, beta)."""
    if not alpha.is_square:
        raise ValueError("alpha must be square")
    chains = jordan_chains(alpha)
    size = alpha.rows
    columns: list[tuple[Fraction, ...]] = []
    weights: list[int] = []
    raising: list[tuple[int, int, int]] = []  # (target col, source col, coefficient)
    for chain in chains:
        length = len(chain)
        base = len(columns)
        for i, v in enumerate(chain):  # i is 0-based position along the chain
            columns.append(v)
            weights.append(length - 1 - 2 * i)
            if i > 0:
                # beta v_i = i * (length - i) v_{i-1}
                raising.append((base + i - 1, base + i, i * (length - i)))
    change = Matrix([[columns[c][r] for c in range(size)] for r in range(size)], cols=size)
    change_inv = inverse(change)
    d = Matrix([[weights[i] if i == j else 0 for j in range(size)] for i in range(size)], cols=size)
    b = Matrix.zeros(size).tolist()
    for tgt, src, coef in raising:
        b[tgt][src] = coef
    h = change @ d @ change_inv
    beta = change @ Matrix(b, cols=size) @ change_inv
    triple = SL2Triple(alpha, h, beta)
    if not triple.relations_hold():
        raise ArithmeticError("sl2 relations failed; chain construction is inconsistent")
    return triple


def nprime_subgroup(pair: WhittakerPair) -> RootSet:
    """Weight gap >= 2, plus gap-1 positions whose elementary matrix commutes with alpha."""
    w = pair.weights
    size = len(w)
    out = set(gap_positions(w, 2))
    for i in range(size):
        for j in range(size):
            if w[i] - w[j] == 1:
                e = Matrix.unit(size, i, j)
                if e.commutator(pair.alpha).is_zero():
                    out.add((i, j))
    return frozenset(out)


def hook_whittaker_pair(ell: int, k: int) -> WhittakerPair:
    """The (non-neutral) pair of the derivative coefficient for the hook (k, 1^{ell-k}).

    Weight k-1 on the first ell-k+1 coordinates, then k-3, ..., 1-k; alpha
    is the single chain e_{ell-k} -> e_{ell-k+1} -> ... -> e_{ell-1}.
    """
    if not 1 <= k <= ell:
        raise ValueError("need 1 <= k <= ell")
    weights = [k - 1] * (ell - k + 1) + [k - 1 - 2 * t for t in range(1, k)]
    positions = [(ell - k + t + 1, ell - k + t) for t in range(k - 1)]
    return WhittakerPair(tuple(weights), Matrix.from_positions(ell, positions))
