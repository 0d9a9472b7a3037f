"""Exact sparse row reduction over Q.

Vectors are dicts ``column -> coefficient``.  Columns are any hashable
objects; their elimination priority comes from a caller-supplied ``rank``
function (smaller rank = eliminated first).
"""

from __future__ import annotations

import heapq
from fractions import Fraction


def _div(c, p):
    if p == 1:
        return c
    if p == -1:
        return -c
    r = Fraction(c) / p
    return r.numerator if r.denominator == 1 else r


def _eliminate(v: dict, rows: dict, key, prime):
    """Clear every pivot column of ``rows`` from ``v`` in increasing rank order.

    A stored row only touches columns ranked above its pivot, so a heap of
    pending pivots visits each column at most once.
    """
    heap = [(key(c), c) for c in v if c in rows]
    heapq.heapify(heap)
    while heap:
        _, col = heapq.heappop(heap)
        coef = v.get(col)
        if not coef:
            continue
        for k, rc in rows[col].items():
            old = v.get(k)
            s = (old or 0) - coef * rc
            if prime is not None:
                s %= prime
            if s:
                v[k] = s
                if old is None and k in rows:
                    heapq.heappush(heap, (key(k), k))
            elif old is not None:
                del v[k]
    return v


class EchelonSpace:
    """Incrementally maintained row-echelon basis of a subspace.

    Every stored row has a pivot column (its lowest-rank column) with
    coefficient 1, and no two rows share a pivot.
    """

    def __init__(self, rank=None):
        self.rank = rank or (lambda col: col)
        self.rows = {}  # pivot column -> row dict
        self._ranks = {}

    def __len__(self):
        return len(self.rows)

    def _key(self, col):
        r = self._ranks.get(col)
        if r is None:
            r = self._ranks[col] = self.rank(col)
        return r

    def reduce(self, vec: dict) -> dict:
        """Residual of ``vec`` after elimination against the stored rows."""
        return _eliminate({k: c for k, c in vec.items() if c}, self.rows, self._key, None)

    def add(self, vec: dict):
        """Insert ``vec``; return its pivot column if it was independent, else None."""
        v = self.reduce(vec)
        if not v:
            return None
        col = min(v, key=self._key)
        p = v[col]
        row = {k: _div(c, p) for k, c in v.items()}
        self.rows[col] = row
        return col

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


def nullspace(rows, columns) -> list:
    """Basis of ``{c : sum_j row[j] c_j = 0 for every row}`` over ``columns``.

    ``rows`` is an iterable of sparse dicts keyed by members of ``columns``.
    Returns a list of dicts (sparse solution vectors).
    """
    order = {c: i for i, c in enumerate(columns)}
    space = EchelonSpace(rank=order.__getitem__)
    for r in rows:
        if r:
            space.add(r)
    # back-substitute to reduced row-echelon form
    pivots = sorted(space.rows, key=order.__getitem__, reverse=True)
    reduced = {}
    for pc in pivots:
        row = dict(space.rows[pc])
        for other in list(row):
            if other != pc and other in reduced:
                coef = row[other]
                for k, rc in reduced[other].items():
                    s = row.get(k, 0) - coef * rc
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
        reduced[pc] = row
    free = [c for c in columns if c not in reduced]
    basis = []
    for f in free:
        vec = {f: 1}
        for pc, row in reduced.items():
            c = row.get(f)
            if c:
                vec[pc] = -c
        basis.append(vec)
    return basis


DEFAULT_PRIME = (1 << 61) - 1


def to_residue(c, prime: int = DEFAULT_PRIME) -> int:
    """Image of a rational in Z/prime (the denominator must be invertible)."""
    if isinstance(c, int):
        return c % prime
    c = Fraction(c)
    return c.numerator * pow(c.denominator, -1, prime) % prime


class ModularEchelonSpace:
    """Row-echelon basis over Z/prime, used as a cheap independence filter.

    Vectors independent modulo ``prime`` are independent over Q, so a
    modular hit never admits a dependent vector into an exact space.
    """

    def __init__(self, rank=None, prime: int = DEFAULT_PRIME):
        self.rank = rank or (lambda col: col)
        self.prime = prime
        self.rows = {}
        self._ranks = {}

    def __len__(self):
        return len(self.rows)

    def _key(self, col):
        r = self._ranks.get(col)
        if r is None:
            r = self._ranks[col] = self.rank(col)
        return r

    def reduce(self, vec: dict) -> dict:
        p = self.prime
        v = {}
        for k, c in vec.items():
            r = to_residue(c, p)
            if r:
                v[k] = r
        return _eliminate(v, self.rows, self._key, p)

    def add(self, vec: dict):
        v = self.reduce(vec)
        if not v:
            return None
        col = min(v, key=self._key)
        inv = pow(v[col], -1, self.prime)
        self.rows[col] = {k: c * inv % self.prime for k, c in v.items()}
        return col

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)
