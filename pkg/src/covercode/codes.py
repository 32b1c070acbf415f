"""Linear covering codes given by parity-check matrices.

A parity-check matrix whose columns are read as projective points is a point
set of PG(r-1, q); covering radius ``R`` of the code corresponds to the set
being ``(R-1)``-saturating.  This module holds the exact oracles for both
sides, the direct sum, covering density and the on-disk matrix format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path

import numpy as np

from .gf import FieldTables, parse_header
from .pg import PgSpace, canonicalize, pg_space, rank_of, subset_spans

RADIUS_CAP = 2 * 10**7
PCM_MAGIC = "%covercode-pcm v1"


class CodeError(ValueError):
    pass


@dataclass(eq=False)
class ParityCheck:
    """An ``r x n`` matrix over ``field``; column ``j`` is ``matrix[:, j]``."""

    field: FieldTables
    matrix: np.ndarray
    degenerate: bool = False

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.int64)
        if self.matrix.ndim != 2:
            raise CodeError("parity-check matrix must be 2-dimensional")
        if self.matrix.size and (self.matrix.min() < 0 or self.matrix.max() >= self.field.q):
            raise CodeError("entries outside the field")

    @property
    def r(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    @property
    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in c) for c in self.matrix.T]

    def rank(self) -> int:
        return rank_of(self.columns, self.field)

    def full_rank(self) -> bool:
        return self.rank() == self.r

    def to_points(self) -> list[tuple[int, ...]]:
        """Columns as canonical points of PG(r-1, q)."""
        return [canonicalize(c, self.field) for c in self.columns]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParityCheck):
            return NotImplemented
        return self.field is other.field and np.array_equal(self.matrix, other.matrix)

    # -- text format --------------------------------------------------------

    def dumps(self) -> str:
        lines = [PCM_MAGIC, f"{self.field.header()} rows {self.r} cols {self.n}"]
        lines += [" ".join(str(int(x)) for x in row) for row in self.matrix]
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())


def loads_pcm(text: str) -> ParityCheck:
    lines = text.splitlines()
    if not lines or lines[0].strip() != PCM_MAGIC:
        raise CodeError("missing pcm header line")
    head = lines[1].split()
    if len(head) != 6 or head[2] != "rows" or head[4] != "cols":
        raise CodeError(f"bad pcm dimension line {lines[1]!r}")
    F = parse_header(" ".join(head[:2]))
    r, n = int(head[3]), int(head[5])
    body = lines[2 : 2 + r]
    if len(body) != r:
        raise CodeError(f"expected {r} matrix rows, found {len(body)}")
    rows = []
    for ln in body:
        vals = [int(x) for x in ln.split()]
        if len(vals) != n:
            raise CodeError(f"expected {n} entries per row, found {len(vals)}")
        rows.append(vals)
    mat = np.array(rows, dtype=np.int64).reshape(r, n)
    return ParityCheck(F, mat)


def load_pcm(path) -> ParityCheck:
    return loads_pcm(Path(path).read_text())


# -- constructors ---------------------------------------------------------


def set_to_parity_check(points, field: FieldTables) -> ParityCheck:
    pts = [canonicalize(p, field) for p in points]
    if not pts:
        raise CodeError("empty point set")
    if len(set(pts)) != len(pts):
        raise CodeError("duplicate points in the set")
    return ParityCheck(field, np.array(pts, dtype=np.int64).T)


def identity_code(r: int, field: FieldTables) -> ParityCheck:
    """The trivial [r, 0] code; its covering radius is r."""
    return ParityCheck(field, np.eye(r, dtype=np.int64))


def hamming_code(r: int, field: FieldTables) -> ParityCheck:
    """All points of PG(r-1, q) as columns: the perfect radius-1 code."""
    return ParityCheck(field, pg_space(r - 1, field).points.T.copy())


def direct_sum(h1: ParityCheck, h2: ParityCheck) -> ParityCheck:
    if h1.field is not h2.field:
        raise CodeError("direct sum needs a common field")
    m = np.zeros((h1.r + h2.r, h1.n + h2.n), dtype=np.int64)
    m[: h1.r, : h1.n] = h1.matrix
    m[h1.r :, h1.n :] = h2.matrix
    return ParityCheck(h1.field, m)


def covering_density(n: int, r: int, q: int, R: int) -> Fraction:
    """Sphere volume over the size of the syndrome space."""
    if min(n, r, q) <= 0 or R < 0:
        raise CodeError("parameters must be positive")
    vol = sum(comb(n, i) * (q - 1) ** i for i in range(R + 1))
    return Fraction(vol, q**r)


# -- covering radius ------------------------------------------------------


@dataclass
class RadiusReport:
    radius: int
    coset_weight_histogram: list[int] = field(default_factory=list)


class _SyndromeCoder:
    """Integer codes for GF(q)^r with vectorized addition of codes."""

    def __init__(self, F: FieldTables, r: int):
        self.F = F
        self.r = r
        self.ndig = r * F.e
        self.p = F.p
        self.size = F.q**r
        self._pw = np.array([F.q ** (r - 1 - i) for i in range(r)], dtype=np.int64)
        self._ppw = np.array([F.p**j for j in range(self.ndig)], dtype=np.int64)

    def encode(self, vecs: np.ndarray) -> np.ndarray:
        return np.asarray(vecs, dtype=np.int64) @ self._pw

    def digits(self, codes: np.ndarray) -> np.ndarray:
        return (codes[..., None] // self._ppw) % self.p

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """All pairwise sums: ``out[i, j] = a[i] + b[j]``."""
        if self.p == 2:
            return a[:, None] ^ b[None, :]
        da = self.digits(a).astype(np.int16)
        db = self.digits(b).astype(np.int16)
        s = (da[:, None, :] + db[None, :, :]) % self.p
        return s.astype(np.int64) @ self._ppw


def covering_radius(H: ParityCheck, cap: int = RADIUS_CAP) -> RadiusReport:
    """Exact covering radius by breadth-first layering of the syndrome space."""
    F, r = H.field, H.r
    if F.q**r > cap:
        raise CodeError(f"syndrome space q^r = {F.q**r} exceeds the radius cap {cap}")
    if not H.full_rank():
        raise CodeError("parity-check matrix is rank deficient; covering radius undefined")
    coder = _SyndromeCoder(F, r)
    cols = H.matrix.T
    mults = []
    for c in range(1, F.q):
        mults.append(coder.encode(F.mul(cols, c)))
    moves = np.unique(np.concatenate(mults))
    moves = moves[moves != 0]

    seen = np.zeros(coder.size, dtype=bool)
    seen[0] = True
    frontier = np.array([0], dtype=np.int64)
    hist = [1]
    budget = 1 << 22
    while True:
        step = max(1, budget // max(1, moves.size))
        fresh = []
        for s in range(0, frontier.size, step):
            sums = coder.add(frontier[s : s + step], moves).ravel()
            sums = np.unique(sums)
            sums = sums[~seen[sums]]
            seen[sums] = True
            fresh.append(sums)
        frontier = np.concatenate(fresh) if fresh else np.zeros(0, dtype=np.int64)
        if frontier.size == 0:
            break
        hist.append(int(frontier.size))
    return RadiusReport(len(hist) - 1, hist)


def covering_radius_bruteforce(H: ParityCheck, max_weight: int | None = None) -> int:
    """Covering radius by enumerating column subsets and coefficient tuples.

    Independent of :func:`covering_radius`; only for tiny instances.
    """
    F, r, n = H.field, H.r, H.n
    coder = _SyndromeCoder(F, r)
    reached = {0}
    cols = H.matrix.T
    limit = n if max_weight is None else max_weight
    for w in range(1, limit + 1):
        for sub in combinations(range(n), w):
            for cs in np.ndindex(*([F.q - 1] * w)):
                v = np.zeros(r, dtype=np.int64)
                for j, c in zip(sub, cs):
                    v = F.add(v, F.mul(cols[j], c + 1))
                reached.add(int(coder.encode(v)))
        if len(reached) == coder.size:
            return w
    raise CodeError("syndromes left unreached; matrix is rank deficient")


# -- saturation -----------------------------------------------------------


def saturation_level(points, space: PgSpace) -> int | None:
    """Smallest rho with every point on a span of at most rho+1 points of S.

    Returns None when S does not span the whole space.
    """
    F, N = space.field, space.N
    pts = sorted({canonicalize(p, F) for p in points}, key=space.index)
    if not pts or rank_of(pts, F) < N + 1:
        return None
    covered = np.zeros(space.size, dtype=bool)
    covered[[space.index(p) for p in pts]] = True
    if covered.all():
        return 0
    for k in range(2, N + 1):
        for chunk in _chunked(combinations(pts, k), 4096):
            covered[subset_spans(space, chunk)] = True
        if covered.all():
            return k - 1
    return N


def _chunked(it, size):
    buf = []
    for x in it:
        buf.append(x)
        if len(buf) == size:
            yield buf
            buf = []
    if buf:
        yield buf
