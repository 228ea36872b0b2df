"""Finite quasi-discrete closure spaces.

A binary relation ``R`` on points ``0..n-1`` induces the closure operator

    C(A) = A | {x : exists a in A with (a, x) in R'}

where ``R'`` is ``R``, its inverse, or their union depending on ``direction``.
Idempotence is not assumed: ``C(C(A))`` is generally larger than ``C(A)``.
"""
from __future__ import annotations

from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from .errors import DomainError, MalformedSpaceError


class Direction(str, Enum):
    FORWARD = "forward"
    INVERSE = "inverse"
    SYMMETRIC = "symmetric"

    @classmethod
    def parse(cls, text):
        aliases = {"symmetric-closure": "symmetric", "sym": "symmetric", "inv": "inverse", "fwd": "forward"}
        try:
            return cls(aliases.get(text, text))
        except ValueError:
            raise MalformedSpaceError(f"unknown closure direction {text!r}") from None


class PointSet:
    """Immutable dense set of point ids over a carrier of ``size`` points."""

    __slots__ = ("_mask",)

    def __init__(self, mask):
        mask = np.array(mask, dtype=np.uint8, copy=True).ravel()
        mask[mask != 0] = 1
        mask.flags.writeable = False
        self._mask = mask

    @classmethod
    def empty(cls, size):
        return cls(np.zeros(size, dtype=np.uint8))

    @classmethod
    def full(cls, size):
        return cls(np.ones(size, dtype=np.uint8))

    @classmethod
    def from_ids(cls, size, ids: Iterable[int]):
        mask = np.zeros(size, dtype=np.uint8)
        ids = np.fromiter((int(i) for i in ids), dtype=np.intp)
        if ids.size and (ids.min() < 0 or ids.max() >= size):
            raise DomainError(f"point ids outside [0, {size})")
        mask[ids] = 1
        return cls(mask)

    @property
    def size(self):
        """Number of points in the carrier (not the cardinality of the set)."""
        return self._mask.shape[0]

    @property
    def mask(self):
        return self._mask

    def ids(self):
        return [int(i) for i in np.flatnonzero(self._mask)]

    def __len__(self):
        return int(self._mask.sum())

    def __iter__(self):
        return iter(self.ids())

    def __contains__(self, i):
        return 0 <= i < self.size and bool(self._mask[i])

    def _check(self, other):
        if not isinstance(other, PointSet):
            raise TypeError(f"expected a PointSet, got {type(other).__name__}")
        if other.size != self.size:
            raise DomainError(f"point sets over carriers of size {self.size} and {other.size}")
        return other

    def __and__(self, other):
        other = self._check(other)
        return PointSet(self._mask & other._mask)

    def __or__(self, other):
        other = self._check(other)
        return PointSet(self._mask | other._mask)

    def __sub__(self, other):
        other = self._check(other)
        return PointSet(self._mask & (1 - other._mask))

    def complement(self):
        return PointSet(1 - self._mask)

    __invert__ = complement

    def issubset(self, other):
        other = self._check(other)
        return not np.any(self._mask & (1 - other._mask))

    __le__ = issubset

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.size == other.size and np.array_equal(self._mask, other._mask)

    def __hash__(self):
        return hash((self.size, self._mask.tobytes()))

    def __repr__(self):
        return f"PointSet({self.ids()}, size={self.size})"


class SpaceRelation:
    """Binary relation on points ``0..point_count-1``; duplicate pairs collapse."""

    def __init__(self, point_count: int, edges=()):
        if point_count < 0:
            raise MalformedSpaceError("negative point count")
        self.point_count = int(point_count)
        if isinstance(edges, tuple) and len(edges) == 2 and isinstance(edges[0], np.ndarray):
            pairs = np.stack([np.asarray(edges[0]), np.asarray(edges[1])], axis=1)
        else:
            pairs = np.array([(int(a), int(b)) for a, b in edges], dtype=np.intp).reshape(-1, 2)
        pairs = pairs.astype(np.intp, copy=False)
        bad = (pairs < 0) | (pairs >= self.point_count)
        if bad.any():
            a, b = pairs[np.flatnonzero(bad.any(axis=1))[0]]
            raise MalformedSpaceError(
                f"edge ({a}, {b}) has an endpoint outside [0, {self.point_count})")
        pairs = np.unique(pairs, axis=0) if len(pairs) else pairs
        pairs.flags.writeable = False
        self.pairs = pairs

    @property
    def edges(self):
        return frozenset((int(a), int(b)) for a, b in self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __eq__(self, other):
        return (isinstance(other, SpaceRelation) and self.point_count == other.point_count
                and np.array_equal(self.pairs, other.pairs))

    def __repr__(self):
        return f"SpaceRelation({self.point_count}, {len(self)} edges)"


def _csr(n, src, dst):
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.intp)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, np.ascontiguousarray(dst, dtype=np.intp)


class ClosureSpace:
    """Closure space induced by a relation; immutable after construction.

    ``succ`` is the CSR adjacency of ``R'`` (used by closure), ``pred`` the CSR
    of its inverse (used by backward floods such as reachability).
    """

    def __init__(self, relation: SpaceRelation, direction=Direction.FORWARD,
                 labels: Optional[Sequence[str]] = None):
        self.relation = relation
        self.direction = Direction.parse(direction) if isinstance(direction, str) else direction
        self.labels = tuple(labels) if labels is not None else None
        n = relation.point_count
        a, b = relation.pairs[:, 0], relation.pairs[:, 1]
        if self.direction is Direction.INVERSE:
            a, b = b, a
        elif self.direction is Direction.SYMMETRIC:
            both = np.concatenate([relation.pairs, relation.pairs[:, ::-1]])
            both = np.unique(both, axis=0) if len(both) else both
            a, b = both[:, 0], both[:, 1]
        self.succ = _csr(n, a, b)
        self.pred = _csr(n, b, a)
        for arr in (*self.succ, *self.pred):
            arr.flags.writeable = False

    @property
    def size(self):
        return self.relation.point_count

    def points(self):
        return range(self.size)

    def label(self, i):
        return self.labels[i] if self.labels else str(i)

    def successors(self, i):
        indptr, indices = self.succ
        return indices[indptr[i]:indptr[i + 1]]

    def predecessors(self, i):
        indptr, indices = self.pred
        return indices[indptr[i]:indptr[i + 1]]

    def carrier(self):
        return PointSet.full(self.size)

    def empty(self):
        return PointSet.empty(self.size)

    def point_set(self, ids):
        return PointSet.from_ids(self.size, ids)

    def _coerce(self, A):
        if isinstance(A, PointSet):
            if A.size != self.size:
                raise DomainError(f"point set over {A.size} points used with a space of {self.size}")
            return A
        return self.point_set(A)

    def closure(self, A):
        A = self._coerce(A)
        return PointSet(kernels.closure_step(*self.succ, A.mask))

    def interior(self, A):
        A = self._coerce(A)
        return self.closure(A.complement()).complement()

    def frontier(self, A):
        A = self._coerce(A)
        return self.closure(A) - A

    def __repr__(self):
        return f"ClosureSpace({self.size} points, {len(self.relation)} edges, {self.direction.value})"


def from_relation(rel: SpaceRelation, direction=Direction.FORWARD, labels=None) -> ClosureSpace:
    return ClosureSpace(rel, direction, labels)


def closure(space: ClosureSpace, A) -> PointSet:
    return space.closure(A)


def interior(space: ClosureSpace, A) -> PointSet:
    return space.interior(A)


def frontier(space: ClosureSpace, A) -> PointSet:
    return space.frontier(A)
