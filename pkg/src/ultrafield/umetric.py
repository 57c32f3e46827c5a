"""Finite ultrametric spaces with exponent-valued distances.

Entry ``g`` of the matrix stands for the distance ``eta ** -g``; the diagonal
holds :data:`INF` (distance zero).  In exponent form the strong triangle
inequality reads ``g(x, y) >= min(g(x, z), g(z, y))``.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .errors import MalformedMatrix, NotUltrametric
from .valuecore import INF, Exponent, exponent

__all__ = [
    "UltraSpace", "SENTINEL", "verify_ultrametric", "sentinel_extend",
    "random_ultrametric",
]

SENTINEL = "ϖ"


def _check_shape(labels, matrix):
    n = len(labels)
    if len(set(labels)) != n:
        raise MalformedMatrix("point labels must be distinct")
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise MalformedMatrix(f"expected a {n}x{n} matrix")
    for i in range(n):
        if matrix[i][i] is not INF:
            raise MalformedMatrix(f"diagonal entry for {labels[i]!r} must be inf")
        for j in range(i + 1, n):
            if matrix[i][j] != matrix[j][i]:
                raise MalformedMatrix(f"asymmetric entry at ({labels[i]!r}, {labels[j]!r})")


def verify_ultrametric(labels: Sequence, matrix) -> tuple[bool, tuple | None]:
    """Check every ordered triple; return ``(ok, first_violating_triple)``.

    Triples are scanned in lexicographic order of ``(x, y, z)`` and a
    violation ``(x, y, z)`` means ``g(x, y) < min(g(x, z), g(z, y))``.
    Raises :class:`MalformedMatrix` for asymmetry or a finite diagonal.
    """
    matrix = [[exponent(v) for v in row] for row in matrix]
    _check_shape(labels, matrix)
    r = _ranks(matrix)
    n = len(labels)
    for i in range(n):
        row_i = r[i]
        for j in range(n):
            gij = row_i[j]
            for k in range(n):
                if gij < row_i[k] and gij < r[k][j]:
                    return False, (labels[i], labels[j], labels[k])
    return True, None


def _ranks(matrix):
    """Replace exponents by order-preserving ints so the triple scan is cheap."""
    values = sorted({v for row in matrix for v in row if v is not INF})
    rank = {v: i for i, v in enumerate(values)}
    top = len(values)
    return [[top if v is INF else rank[v] for v in row] for row in matrix]


class UltraSpace:
    """A validated finite ultrametric space."""

    def __init__(self, labels, exponents, *, check: bool = True):
        labels = tuple(labels)
        rows = tuple(tuple(exponent(v) for v in row) for row in exponents)
        self.labels = labels
        self.exponents = rows
        self._index = {x: i for i, x in enumerate(labels)}
        if check:
            ok, triple = verify_ultrametric(labels, rows)
            if not ok:
                raise NotUltrametric(f"strong triangle inequality fails at {triple}", triple)
            for i in range(len(labels)):
                for j in range(len(labels)):
                    if i != j and rows[i][j] is INF:
                        raise MalformedMatrix(
                            f"distinct points {labels[i]!r}, {labels[j]!r} at distance zero")

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self._index

    def index(self, label) -> int:
        return self._index[label]

    def g(self, x, y) -> Exponent:
        """Distance exponent between two labelled points."""
        return self.exponents[self._index[x]][self._index[y]]

    def exponent_set(self) -> set:
        n = len(self.labels)
        return {self.exponents[i][j] for i in range(n) for j in range(i + 1, n)}

    def subspace(self, labels) -> "UltraSpace":
        idx = [self._index[x] for x in labels]
        rows = [[self.exponents[i][j] for j in idx] for i in idx]
        return UltraSpace(labels, rows, check=False)

    def reordered(self, labels) -> "UltraSpace":
        if len(labels) != len(self) or set(labels) != set(self.labels):
            raise ValueError("reordering must be a permutation of the labels")
        return self.subspace(labels)

    def with_point(self, label, exps: dict) -> "UltraSpace":
        """The space enlarged by ``label`` at the given exponents to every point."""
        if label in self._index:
            raise ValueError(f"label {label!r} already present")
        missing = [x for x in self.labels if x not in exps]
        if missing:
            raise MalformedMatrix(f"no distance given from {label!r} to {missing}")
        new_row = [exponent(exps[x]) for x in self.labels]
        for x, g in zip(self.labels, new_row):
            if g is INF:
                raise MalformedMatrix(f"{label!r} would coincide with {x!r}")
        # only triples through the new point can fail
        n = len(self.labels)
        for i in range(n):
            for k in range(n):
                a, b, c = new_row[i], new_row[k], self.exponents[i][k]
                if a < min(b, c):
                    raise NotUltrametric(
                        f"strong triangle inequality fails at {(label, self.labels[i], self.labels[k])}",
                        (label, self.labels[i], self.labels[k]))
                if c < min(a, b):
                    raise NotUltrametric(
                        f"strong triangle inequality fails at {(self.labels[i], self.labels[k], label)}",
                        (self.labels[i], self.labels[k], label))
        rows = [list(row) + [new_row[i]] for i, row in enumerate(self.exponents)]
        rows.append(new_row + [INF])
        return UltraSpace(self.labels + (label,), rows, check=False)

    def __eq__(self, other):
        return (isinstance(other, UltraSpace) and self.labels == other.labels
                and self.exponents == other.exponents)

    def __hash__(self):
        return hash((self.labels, self.exponents))

    def __repr__(self):
        return f"UltraSpace({list(self.labels)!r})"


def sentinel_extend(X: UltraSpace, x0=None, g0=None, label: str = SENTINEL) -> UltraSpace:
    """Add a point at exponent ``min(g(x, x0), g0)`` from every ``x``.

    Defaults: ``x0`` is the first label and ``g0`` the least off-diagonal
    exponent (so the sentinel sits at the largest distance in use); for a
    one-point space ``g0`` defaults to 0.
    """
    if label in X:
        raise ValueError(f"sentinel label {label!r} clashes with a point")
    if x0 is None:
        x0 = X.labels[0]
    if x0 not in X:
        raise KeyError(f"base point {x0!r} not in the space")
    if g0 is None:
        es = X.exponent_set()
        g0 = min(es) if es else Fraction(0)
    g0 = exponent(g0)
    if g0 is INF:
        raise ValueError("the sentinel must sit at a positive distance")
    row = [min(X.g(x, x0), g0) for x in X.labels]
    # ultrametric by construction: h(x, w) = max(d(x, x0), d(x0, w)) in distance terms
    rows = [list(r) + [row[i]] for i, r in enumerate(X.exponents)]
    rows.append(row + [INF])
    return UltraSpace(X.labels + (label,), rows, check=False)


def random_ultrametric(n: int, depth: int = 4, seed: int = 0, *, denominator: int = 1,
                       base: int | None = None, prefix: str = "x") -> UltraSpace:
    """Leaves of a random rooted tree; ``g(x, y)`` is the level of their LCA.

    Each internal node sits at a level strictly above its parent's, with
    steps that are multiples of ``1/denominator``.  Past ``depth`` splits a
    group is broken into singletons at once.
    """
    if n < 1:
        raise ValueError("need at least one point")
    rng = random.Random(seed)
    labels = [f"{prefix}{i}" for i in range(n)]
    rows = [[INF] * n for _ in range(n)]
    lo = -2 * denominator if base is None else base * denominator
    root = Fraction(rng.randint(lo, lo + 4 * denominator), denominator)

    def split(members, level, d):
        if len(members) < 2:
            return
        if d >= depth:
            groups = [[m] for m in members]
        else:
            k = rng.randint(2, min(len(members), 4))
            shuffled = members[:]
            rng.shuffle(shuffled)
            cuts = sorted(rng.sample(range(1, len(shuffled)), k - 1))
            groups = [shuffled[a:b] for a, b in zip([0] + cuts, cuts + [len(shuffled)])]
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                for i in groups[a]:
                    for j in groups[b]:
                        rows[i][j] = rows[j][i] = level
        for grp in groups:
            step = Fraction(rng.randint(1, 2 * denominator), denominator)
            split(sorted(grp), level + step, d + 1)

    split(list(range(n)), root, 0)
    return UltraSpace(labels, rows)
