"""Points, subspaces and hyperplanes of PG(N, q).

Points are canonical coordinate tuples (first nonzero entry equal to 1) and
are numbered densely in lexicographic order of those tuples.  The numbering is
computed arithmetically, so no lookup table is needed: a point with ``k``
leading zeros has id ``theta(N-k-1) + v`` where ``v`` is the base-q value of
its trailing ``N-k`` coordinates.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .gf import FieldTables

POINT_CAP = 1 << 31
COORD_CACHE_CAP = 1 << 22


class GeometryError(ValueError):
    pass


class BlockingSetError(GeometryError):
    """Every hyperplane meets the given point set."""


def theta(m: int, q: int) -> int:
    """Number of points of PG(m, q); theta(-1, q) == 0."""
    if m < 0:
        return 0
    return (q ** (m + 1) - 1) // (q - 1)


@lru_cache(maxsize=None)
def _scalar_ops(F: FieldTables):
    q = F.q
    if F.add_table is not None:
        add = F.add_table.tolist()
        mul = F.mul_table.tolist()
    else:
        add = None
        mul = None
    inv = [0] + [F.inv(a) for a in range(1, q)] if q <= 1 << 16 else None
    neg = [F.neg(a) for a in range(q)] if q <= 1 << 16 else None
    return add, mul, inv, neg


def rref(rows, F: FieldTables) -> list[list[int]]:
    """Reduced row echelon form of small integer matrices over ``F``.

    Zero rows are dropped, so ``len(result)`` is the rank.  Every row has a
    leading 1 and pivots increase strictly.
    """
    add, mul, inv, neg = _scalar_ops(F)
    if add is None:
        add = lambda a, b: F.add(a, b)  # noqa: E731
        mul_f = lambda a, b: F.mul(a, b)  # noqa: E731
    else:
        _a, _m = add, mul
        add = lambda a, b: _a[a][b]  # noqa: E731
        mul_f = lambda a, b: _m[a][b]  # noqa: E731
    inv_f = (lambda a: inv[a]) if inv is not None else F.inv
    neg_f = (lambda a: neg[a]) if neg is not None else F.neg

    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = inv_f(m[r][c])
        if s != 1:
            m[r] = [mul_f(s, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = neg_f(m[i][c])
                m[i] = [add(x, mul_f(f, y)) for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    for row in m[:r]:
        out.append(row)
    return out


def canonicalize(v, F: FieldTables) -> tuple[int, ...]:
    """Scale a nonzero vector so that its first nonzero coordinate is 1."""
    v = [int(x) for x in v]
    for x in v:
        if x:
            s = F.inv(x)
            return tuple(F.mul(s, y) for y in v)
    raise GeometryError("the zero vector is not a projective point")


def canonicalize_rows(arr: np.ndarray, F: FieldTables) -> np.ndarray:
    """Vectorized :func:`canonicalize` along the last axis (rows must be nonzero)."""
    arr = np.asarray(arr, dtype=np.int64)
    lead = np.argmax(arr != 0, axis=-1)
    lv = np.take_along_axis(arr, lead[..., None], axis=-1)
    if np.any(lv == 0):
        raise GeometryError("zero row cannot be canonicalized")
    return F.mul(arr, F.inv(lv))


def rank_of(points, F: FieldTables) -> int:
    return len(rref(points, F))


def general_position(points, F: FieldTables) -> bool:
    return rank_of(points, F) == len(points)


def linear_combinations(F: FieldTables, coeffs: np.ndarray, bases: np.ndarray) -> np.ndarray:
    """``out[b, t] = sum_i coeffs[t, i] * bases[b, i]`` over ``F``.

    ``coeffs`` is ``(T, k)``, ``bases`` is ``(B, k, n)``; result ``(B, T, n)``.
    """
    if F.e == 1:
        out = np.einsum("ti,bin->btn", coeffs, bases)
        return out % F.p
    acc = None
    for i in range(coeffs.shape[1]):
        term = F.mul(coeffs[None, :, i, None], bases[:, None, i, :])
        acc = term if acc is None else F.add(acc, term)
    return acc


class PgSpace:
    """PG(N, q) with a dense, lexicographic point numbering."""

    def __init__(self, N: int, field: FieldTables):
        if N < 0:
            raise GeometryError("dimension must be non-negative")
        self.N = N
        self.field = field
        self.q = field.q
        self.size = theta(N, self.q)
        if self.size > POINT_CAP:
            raise GeometryError(f"PG({N},{self.q}) has {self.size} points, above the cap {POINT_CAP}")
        q = self.q
        self._pow = np.array([q ** (N - j) for j in range(N + 1)], dtype=np.int64)
        self._starts = np.array([theta(N - k - 1, q) for k in range(N, -1, -1)], dtype=np.int64)
        self._coords = None

    def __repr__(self) -> str:
        return f"PG({self.N},{self.q})"

    def __len__(self) -> int:
        return self.size

    @property
    def points(self) -> np.ndarray:
        """All canonical points, row ``i`` having id ``i``."""
        if self._coords is None:
            if self.size > COORD_CACHE_CAP:
                raise GeometryError(f"{self!r} too large to materialize")
            c = self.coords_of(np.arange(self.size, dtype=np.int64))
            c.setflags(write=False)
            self._coords = c
        return self._coords

    def ids_of(self, arr) -> np.ndarray:
        """Ids of canonical coordinate rows (last axis)."""
        arr = np.asarray(arr, dtype=np.int64)
        q = self.q
        lead = np.argmax(arr != 0, axis=-1)
        val = arr @ self._pow
        tail = self._pow[lead]
        return (tail - 1) // (q - 1) + val % tail

    def coords_of(self, ids) -> np.ndarray:
        ids = np.asarray(ids, dtype=np.int64)
        if self._coords is not None:
            return self._coords[ids]
        q, N = self.q, self.N
        # _starts ascending by block: block for lead k starts at theta(N-k-1)
        blk = np.searchsorted(self._starts, ids, side="right") - 1
        lead = N - blk
        v = ids - self._starts[blk]
        out = np.zeros(ids.shape + (N + 1,), dtype=np.int64)
        for j in range(N, -1, -1):
            digit = v % q
            v = v // q
            out[..., j] = np.where(j > lead, digit, 0)
        np.put_along_axis(out, lead[..., None], 1, axis=-1)
        return out

    def point(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.coords_of(np.int64(i)))

    def index(self, coords) -> int:
        c = canonicalize(coords, self.field)
        if len(c) != self.N + 1:
            raise GeometryError(f"expected {self.N + 1} coordinates")
        return int(self.ids_of(np.array(c)))

    def span_ids(self, bases: np.ndarray) -> np.ndarray:
        """Point ids of the subspaces spanned by RREF bases ``(B, k, N+1)``.

        Because the bases are reduced and the coefficient vectors canonical,
        every combination comes out canonical.
        """
        bases = np.asarray(bases, dtype=np.int64)
        k = bases.shape[1]
        coeffs = pg_space(k - 1, self.field).points
        return self.ids_of(linear_combinations(self.field, coeffs, bases))


@lru_cache(maxsize=64)
def pg_space(N: int, field: FieldTables) -> PgSpace:
    return PgSpace(N, field)


def span_closure(points, space: PgSpace) -> np.ndarray:
    """Sorted ids of all points in the subspace generated by ``points``."""
    pts = [tuple(p) for p in points]
    if not pts:
        raise GeometryError("empty point list")
    basis = rref(pts, space.field)
    ids = space.span_ids(np.array([basis]))[0]
    return np.unique(ids)


def subset_spans(space: PgSpace, point_lists) -> np.ndarray:
    """Concatenated ids of the spans of many small point sets (duplicates kept)."""
    by_rank: dict[int, list] = {}
    for pts in point_lists:
        b = rref(pts, space.field)
        by_rank.setdefault(len(b), []).append(b)
    chunks = []
    for k, bases in by_rank.items():
        per = pg_space(k - 1, space.field).size
        step = max(1, (1 << 21) // per)
        for s in range(0, len(bases), step):
            chunks.append(space.span_ids(np.array(bases[s : s + step])).ravel())
    if not chunks:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(chunks)


def normal_rational_curve(space: PgSpace) -> list[tuple[int, ...]]:
    """The q+1 points (1, t, ..., t^N) and (0, ..., 0, 1), in id order."""
    F, N = space.field, space.N
    if F.q + 1 < N + 2 and N > 1:
        raise GeometryError(f"normal rational curve of {space!r} is not an arc (need q >= N+1)")
    pts = [tuple([0] * N + [1])]
    for t in range(F.q):
        row, x = [], 1
        for _ in range(N + 1):
            row.append(x)
            x = F.mul(x, t)
        pts.append(tuple(row))
    return sorted(pts, key=space.index)


def hyperplane_basis(h, F: FieldTables) -> list[list[int]]:
    """RREF basis of the vectors orthogonal to ``h``."""
    h = canonicalize(h, F)
    k = next(i for i, x in enumerate(h) if x)
    vecs = []
    for j in range(len(h)):
        if j == k:
            continue
        v = [0] * len(h)
        v[j] = 1
        v[k] = F.neg(h[j])
        vecs.append(v)
    return rref(vecs, F)


def hyperplane_points(h, space: PgSpace) -> np.ndarray:
    """Sorted ids of the points P with h . P = 0."""
    basis = hyperplane_basis(h, space.field)
    if not basis:
        raise GeometryError("PG(0,q) has no hyperplane points")
    return np.sort(space.span_ids(np.array([basis]))[0])


def find_skew_hyperplane(S, space: PgSpace, rng: np.random.Generator, trials: int | None = None):
    """A canonical dual vector whose hyperplane misses every point id in ``S``.

    Seeded random dual points are tried first; if all miss, the whole dual
    space is scanned in id order.
    """
    F = space.field
    ids = np.asarray(sorted(set(int(i) for i in S)), dtype=np.int64)
    if ids.size == 0:
        return space.point(int(rng.integers(space.size)))
    pts = space.coords_of(ids)
    if trials is None:
        trials = 64 * (space.N + 1)
    cand = rng.integers(space.size, size=trials)
    for c in cand:
        h = space.coords_of(np.int64(c))
        if np.all(F.dot(pts, h[None, :]) != 0):
            return tuple(int(x) for x in h)
    chunk = max(1, (1 << 22) // max(1, ids.size))
    for s in range(0, space.size, chunk):
        H = space.coords_of(np.arange(s, min(space.size, s + chunk), dtype=np.int64))
        ok = np.all(F.dot(H[:, None, :], pts[None, :, :]) != 0, axis=1)
        hit = np.flatnonzero(ok)
        if hit.size:
            return tuple(int(x) for x in H[hit[0]])
    raise BlockingSetError(f"{ids.size} points block every hyperplane of {space!r}")


def arc_check(points, F: FieldTables, k: int) -> bool:
    """True if every ``k`` of the points are linearly independent."""
    return all(rank_of(c, F) == k for c in combinations(points, k))
