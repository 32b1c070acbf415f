"""The q^m-concatenating lift of a short covering code.

From an ``[n0, n0 - r0]_q`` code of covering radius at most ``R`` with
``n0 <= q + 1`` the lift builds, for each ``m >= 1``, a code of codimension
``r0 + R*m`` and radius at most ``R``.  Columns are

* type A: ``(h_i; rep(xi*mu_i1); ...; rep(xi*mu_iR))`` for every column
  ``h_i`` of the starting matrix and every ``xi`` in GF(q^m);
* type B: the points of PG(m-1, q), placed in each of the R lower blocks;
* optional padding: ``q^m`` copies of each block's first type-B column, so
  the length equals ``n0*q^m + R*theta(m, q)``.

Why the radius is preserved: a syndrome ``(s; v_1..v_R)`` with
``s = sum_{k<=R'} c_k h_{i_k}`` is met by choosing the ``xi_k`` from an
invertible ``R' x R'`` subsystem of the multiplier matrix over GF(q^m), then
covering each of the remaining ``R - R'`` blocks with one type-B column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .codes import ParityCheck, covering_radius, RADIUS_CAP
from .gf import FieldTables, field_create, subfield_embedding
from .pg import normal_rational_curve, pg_space, theta


class LiftError(ValueError):
    pass


def nrc_multipliers(n0: int, R: int, F: FieldTables) -> list[tuple[int, ...]]:
    """Multiplier tuples: any min(R, n0) of them are linearly independent.

    The first ``n0`` curve points of PG(R-1, q) when ``n0 <= q + 1`` and
    ``q >= R``; otherwise, if ``n0 <= R``, the unit vectors.
    """
    if n0 <= F.q + 1 and F.q >= R:
        return normal_rational_curve(pg_space(R - 1, F))[:n0]
    if n0 <= R:
        return [tuple(int(i == j) for j in range(R)) for i in range(n0)]
    raise LiftError(f"n0={n0} exceeds q+1={F.q + 1}")


@dataclass
class LiftSpec:
    H0: ParityCheck
    m: int
    R: int
    pad_to_paper_length: bool = False
    mu: list[tuple[int, ...]] | None = None

    def __post_init__(self):
        F = self.H0.field
        if self.m < 1:
            raise LiftError("extension degree m must be at least 1")
        if self.R < 1:
            raise LiftError("R must be positive")
        if self.H0.n > F.q + 1 and self.H0.n > self.R:
            raise LiftError(f"n0={self.H0.n} exceeds q+1={F.q + 1}")
        if not self.H0.full_rank():
            raise LiftError("starting matrix is rank deficient")
        if self.mu is None:
            self.mu = nrc_multipliers(self.H0.n, self.R, F)
        if len(self.mu) != self.H0.n or any(len(t) != self.R for t in self.mu):
            raise LiftError("need one R-tuple multiplier per starting column")

    @property
    def r(self) -> int:
        return self.H0.r + self.R * self.m

    @property
    def n(self) -> int:
        q, m = self.H0.field.q, self.m
        tail = theta(m, q) if self.pad_to_paper_length else theta(m - 1, q)
        return self.H0.n * q**m + self.R * tail

    def manifest(self) -> str:
        F = self.H0.field
        mu = " ".join(",".join(map(str, t)) for t in self.mu)
        return (
            "%covercode-lift v1\n"
            f"n0: {self.H0.n}\nr0: {self.H0.r}\nq: {F.q}\nm: {self.m}\nR: {self.R}\n"
            f"padded: {str(self.pad_to_paper_length).lower()}\nmu: {mu}\n"
        )


@lru_cache(maxsize=None)
def _rep_table(F: FieldTables, m: int) -> tuple[FieldTables, np.ndarray, np.ndarray]:
    """(GF(q^m), embedding table, rep) with rep[x] the GF(q)-coordinates of x.

    Coordinates are with respect to the power basis 1, g, ..., g^(m-1) of the
    primitive element g of GF(q^m).
    """
    big = field_create(F.p, F.e * m)
    emb = subfield_embedding(F, big)
    g = big.primitive if big.q > 2 else 1
    powers = [big.power(g, j) for j in range(m)]
    rep = np.full((big.q, m), -1, dtype=np.int64)
    for cs in product(range(F.q), repeat=m):
        x = 0
        for c, gp in zip(cs, powers):
            x = big.add(x, big.mul(emb(c), gp))
        rep[x] = cs
    if np.any(rep < 0):  # pragma: no cover - powers of g form a basis
        raise LiftError("power basis does not span GF(q^m)")
    rep.setflags(write=False)
    return big, emb.table, rep


def lift_qm(spec: LiftSpec) -> ParityCheck:
    H0, m, R = spec.H0, spec.m, spec.R
    F = H0.field
    q, r0, n0 = F.q, H0.r, H0.n
    big, emb, rep = _rep_table(F, m)
    Q = big.q
    xi = np.arange(Q, dtype=np.int64)
    r = r0 + R * m

    blocks = []
    for i in range(n0):
        A = np.zeros((r, Q), dtype=np.int64)
        A[:r0] = H0.matrix[:, i][:, None]
        for k in range(R):
            prod = big.mul(xi, int(emb[spec.mu[i][k]]))
            A[r0 + k * m : r0 + (k + 1) * m] = rep[prod].T
        blocks.append(A)
    tail_pts = pg_space(m - 1, F).points
    firsts = []
    for k in range(R):
        Bk = np.zeros((r, tail_pts.shape[0]), dtype=np.int64)
        Bk[r0 + k * m : r0 + (k + 1) * m] = tail_pts.T
        blocks.append(Bk)
        firsts.append(Bk[:, :1])
    if spec.pad_to_paper_length:
        for k in range(R):
            blocks.append(np.repeat(firsts[k], Q, axis=1))
    return ParityCheck(F, np.concatenate(blocks, axis=1), degenerate=spec.pad_to_paper_length)


# -- family verification --------------------------------------------------


@dataclass
class FamilyInstance:
    m: int
    r: int
    n: int
    n_padded: int
    radius: int
    radius_padded: int | None
    chain_lhs: float
    chain_rhs: float

    @property
    def chain_ok(self) -> bool:
        return self.chain_lhs < self.chain_rhs


@dataclass
class FamilyReport:
    q: int
    n0: int
    r0: int
    R: int
    phi: float
    c2: int
    instances: list[FamilyInstance] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(i.radius <= self.R for i in self.instances)

    @property
    def chain_holds(self) -> bool:
        return all(i.chain_ok for i in self.instances)

    def to_text(self) -> str:
        lines = [
            "%covercode-family v1",
            f"q: {self.q}", f"n0: {self.n0}", f"r0: {self.r0}", f"R: {self.R}",
            f"phi: {self.phi!r}", f"c2: {self.c2}",
            "# m r n n_padded radius radius_padded chain_lhs chain_rhs chain_ok",
        ]
        for i in self.instances:
            rp = "-" if i.radius_padded is None else i.radius_padded
            lines.append(
                f"{i.m} {i.r} {i.n} {i.n_padded} {i.radius} {rp} {i.chain_lhs:.6g} {i.chain_rhs:.6g} "
                f"{str(i.chain_ok).lower()}"
            )
        return "\n".join(lines) + "\n"


def chain_bound(n0: int, r: int, q: int, R: int, c2: int | None = None) -> tuple[float, float]:
    """(phi, right-hand side) of the family length bound at codimension r.

    ``n0 = phi*(q ln q)^(1/R) + c2`` defines phi; the bound reads
    ``(phi + (c2 + R q/(q-1)) / (q ln q)^(1/R)) * q^((r-R)/R) * (ln q)^(1/R)``.
    """
    c2 = 2 * R if c2 is None else c2
    s = (q * math.log(q)) ** (1.0 / R)
    phi = (n0 - c2) / s
    rhs = (phi + (c2 + R * q / (q - 1)) / s) * q ** ((r - R) / R) * math.log(q) ** (1.0 / R)
    return phi, rhs


def verify_family(H0: ParityCheck, m_range, R: int, check_padded: bool = False,
                  cap: int = RADIUS_CAP) -> FamilyReport:
    F = H0.field
    q = F.q
    phi, _ = chain_bound(H0.n, H0.r + R, q, R)
    rep = FamilyReport(q, H0.n, H0.r, R, phi, 2 * R)
    for m in m_range:
        spec = LiftSpec(H0, m, R)
        H = lift_qm(spec)
        radius = covering_radius(H, cap).radius
        if radius > R:
            raise LiftError(f"lift with m={m} has radius {radius} > R={R}")
        rp = None
        padded = LiftSpec(H0, m, R, pad_to_paper_length=True)
        if check_padded:
            rp = covering_radius(lift_qm(padded), cap).radius
        _, rhs = chain_bound(H0.n, spec.r, q, R)
        rep.instances.append(FamilyInstance(m, spec.r, H.n, padded.n, radius, rp, float(padded.n), rhs))
    return rep
