"""Bound constants and bound functions for short covering codes.

All functions take real ``q`` (several constants are evaluated at
``q = e^(R-1)``); integrality only matters where a construction is run.
Names follow the quantities they compute:

* ``beta(lam, R, q)``      lam - (R-1) / (q ln q)^(1/R)
* ``upsilon(lam, R, q)``   lam^(R-1)/(R-1)! * (ln^(R-1) q / q)^(1/R)
* ``phi(lam, R, q)``       2 / (2 - 1/q - upsilon)
* ``omega(lam, R, q)``     lam + R*R!/beta^(R-1) * phi
* ``d_const(lam, R)``      lam + R*R!/lam^(R-1), the limit of omega
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from math import comb, factorial

from scipy.optimize import bisect

from .pg import theta

ROOT_XTOL = 1e-6


class BoundError(ValueError):
    pass


def _check(lam: float, R: int) -> None:
    if lam <= 0:
        raise BoundError("lambda must be positive")
    if R < 3:
        raise BoundError("R must be at least 3")


def qlnq_root(q: float, R: int) -> float:
    return (q * math.log(q)) ** (1.0 / R)


def start_size(lam: float, R: int, q: float) -> int:
    """Size L of the starting arc: floor(lam * (q ln q)^(1/R))."""
    return math.floor(lam * qlnq_root(q, R))


def beta(lam: float, R: int, q: float) -> float:
    return lam - (R - 1) / qlnq_root(q, R)


def upsilon(lam: float, R: int, q: float) -> float:
    lq = math.log(q)
    return lam ** (R - 1) / factorial(R - 1) * (lq ** (R - 1) / q) ** (1.0 / R)


def phi(lam: float, R: int, q: float) -> float:
    den = 2 - 1 / q - upsilon(lam, R, q)
    if den <= 0:
        raise BoundError(f"phi denominator {den:.4g} <= 0 at q={q}")
    return 2 / den


def phi_star(lam: float, R: int, q: float, L: int | None = None) -> float:
    if L is None:
        L = start_size(lam, R, q)
    den = 2 * q - 1 - comb(L, R - 1)
    if den <= 0:
        raise BoundError(f"phi* denominator {den:.4g} <= 0 at q={q}, L={L}")
    return 2 * q / den


def omega(lam: float, R: int, q: float) -> float:
    b = beta(lam, R, q)
    if b <= 0:
        raise BoundError(f"beta = {b:.4g} <= 0 at q={q}")
    return lam + R * factorial(R) / b ** (R - 1) * phi(lam, R, q)


def omega_star(lam: float, R: int, q: float, L: int | None = None) -> float:
    b = beta(lam, R, q)
    if b <= 0:
        raise BoundError(f"beta = {b:.4g} <= 0 at q={q}")
    return lam + R * factorial(R) / b ** (R - 1) * phi_star(lam, R, q, L)


def psi(q: float, R: int) -> float:
    return (2 + q / (q - 1)) / qlnq_root(q, R)


def d_const(lam: float, R: int) -> float:
    _check(lam, R)
    return lam + math.exp(math.log(R) + math.lgamma(R + 1) - (R - 1) * math.log(lam))


def lambda_min(R: int) -> float:
    """Minimizer of d_const over lambda: (R(R-1) R!)^(1/R)."""
    return math.exp((math.log(R) + math.log(R - 1) + math.lgamma(R + 1)) / R)


def d_min(R: int) -> float:
    return R / (R - 1) * lambda_min(R)


@dataclass(frozen=True)
class Constants:
    D: float
    lambda_min: float
    D_min: float


def constants(lam: float, R: int) -> Constants:
    return Constants(d_const(lam, R), lambda_min(R), d_min(R))


def q_root(lam: float, R: int) -> float:
    """Real root y > e^(R-1) of upsilon(y) = 1, or e^(R-1) if upsilon there is <= 1."""
    _check(lam, R)
    lo = math.exp(R - 1)
    f = lambda y: upsilon(lam, R, y) - 1.0  # noqa: E731
    if f(lo) <= 0:
        return lo
    hi = 2 * lo
    while f(hi) > 0:
        hi *= 2
    return bisect(f, lo, hi, xtol=ROOT_XTOL, rtol=4 * 2.220446049250313e-16, maxiter=500)


def q_of_lambda(lam: float, R: int) -> int:
    """Q_{lam,R}: ceiling of :func:`q_root`, re-bracketed on the integers."""
    x = q_root(lam, R)
    Q = math.ceil(x)
    e = math.exp(R - 1)
    if x == e:
        return Q
    ok = lambda y: y > e and upsilon(lam, R, y) <= 1  # noqa: E731
    # gallop to an integer bracket (lo fails, hi holds), then bisect it
    hi, step = Q, 1
    while not ok(hi):
        hi += step
        step *= 2
    lo, step = hi - 1, 1
    while ok(lo):
        lo -= step
        step *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def c_of_lambda(lam: float, R: int) -> float:
    Q = q_of_lambda(lam, R)
    return lam + R * factorial(R) / beta(lam, R, Q) ** (R - 1) * (2 * Q / (Q - 1))


@dataclass(frozen=True)
class BoundValues:
    lam: float
    R: int
    q: float
    theta: float
    L: int
    beta: float
    upsilon: float
    phi: float | None
    phi_star: float | None
    omega: float | None
    omega_star: float | None
    Q: int
    C: float
    D: float
    D_min: float
    lambda_min: float
    psi: float

    def as_dict(self) -> dict:
        return asdict(self)


def _maybe(fn, *args):
    try:
        return fn(*args)
    except BoundError:
        return None


def bound_functions(lam: float, R: int, q: float, L: int | None = None) -> BoundValues:
    """Every bound quantity at one evaluation point.

    Entries whose denominators are not positive at ``q`` are None.
    """
    _check(lam, R)
    if L is None:
        L = start_size(lam, R, q)
    th = (q ** (R + 1) - 1) / (q - 1)
    return BoundValues(
        lam=lam,
        R=R,
        q=q,
        theta=th,
        L=L,
        beta=beta(lam, R, q),
        upsilon=upsilon(lam, R, q),
        phi=_maybe(phi, lam, R, q),
        phi_star=_maybe(phi_star, lam, R, q, L),
        omega=_maybe(omega, lam, R, q),
        omega_star=_maybe(omega_star, lam, R, q, L),
        Q=q_of_lambda(lam, R),
        C=c_of_lambda(lam, R),
        D=d_const(lam, R),
        D_min=d_min(R),
        lambda_min=lambda_min(R),
        psi=psi(q, R),
    )


# -- length bounds --------------------------------------------------------


@dataclass
class LengthBound:
    value: float
    coefficient: float
    guaranteed: bool
    notes: list[str]
    r: int
    t: int
    asymptotic_3_43R: float | None = None
    psi: float | None = None


def length_bound(q: float, R: int, t: int = 1, lam: float | None = None, mode: str = "decreasing",
                 Q0: float | None = None, coefficient: str | None = None) -> LengthBound:
    """Upper bound on the length of a code with codimension r = tR+1 and radius R.

    ``mode`` is ``"decreasing"`` (coefficient omega(q)), ``"constant"``
    (coefficient C, or omega(Q0) when ``Q0`` is given) or ``"asymptotic"``
    (coefficient D_min, or D_lam when ``coefficient="D"``).
    Applicability is reported in ``guaranteed`` and ``notes``, never raised.
    """
    if lam is None:
        lam = lambda_min(R)
    _check(lam, R)
    if t < 1:
        raise BoundError("t must be at least 1")
    Q = q_of_lambda(lam, R)
    notes = []
    guaranteed = True
    if mode == "decreasing":
        coef = omega(lam, R, q)
        if not q > Q:
            guaranteed = False
            notes.append(f"q={q} is not above Q={Q}")
    elif mode == "constant":
        if Q0 is None:
            coef, q0 = c_of_lambda(lam, R), Q
        else:
            if not Q0 > Q:
                raise BoundError(f"Q0={Q0} must exceed Q={Q}")
            coef, q0 = omega(lam, R, Q0), Q0
        if not q > q0:
            guaranteed = False
            notes.append(f"q={q} is not above {q0}")
    elif mode == "asymptotic":
        coef = d_const(lam, R) if coefficient == "D" else d_min(R)
        guaranteed = False
        notes.append("holds only for q large enough")
    else:
        raise BoundError(f"unknown mode {mode!r}")

    r = t * R + 1
    root = qlnq_root(q, R)
    if t == 1:
        value = coef * root + 2 * R
    else:
        value = coef * q ** ((r - R) / R) * math.log(q) ** (1 / R) + 2 * R * q ** (t - 1) + R * theta_real(t - 1, q)
        side = coef * root + 2 * R
        if side > q + 1:
            guaranteed = False
            notes.append(f"side condition fails: {side:.4g} > q+1")
    lb = LengthBound(value, coef, guaranteed, notes, r, t)
    if mode == "asymptotic":
        lb.asymptotic_3_43R = 3.43 * R * q ** ((r - R) / R) * math.log(q) ** (1 / R)
        lb.psi = psi(q, R)
    return lb


def theta_real(m: int, q: float) -> float:
    if float(q).is_integer():
        return float(theta(m, int(q)))
    return (q ** (m + 1) - 1) / (q - 1)


def length_bound_upper_form(q: float, R: int, coef: float, q0: float | None = None) -> float:
    """The coefficient (c + R(2 + q0/(q0-1))/(q0 ln q0)^(1/R)) of the simplified bound."""
    q0 = q if q0 is None else q0
    return coef + R * psi(q0, R)


# -- D_min inequalities ---------------------------------------------------

DMIN_THRESHOLDS = ((3, 1.651), (7, 0.961), (36, 0.498), (178, 0.4))


def dmin_inequalities(R_max: int) -> list[dict]:
    """Check D_min(R) < c*R for each applicable threshold, R = 3..R_max."""
    if R_max > 10**4:
        raise BoundError("R_max above 10^4")
    rows = []
    for R in range(3, R_max + 1):
        dm = d_min(R)
        for start, c in DMIN_THRESHOLDS:
            if R >= start:
                rows.append({"R": R, "threshold": c, "D_min": dm, "limit": c * R, "ok": dm < c * R})
    return rows


# -- comparator bounds from prior work ------------------------------------


def phi_r2(q: float) -> tuple[float, str]:
    """Piecewise coefficient of the known R = 2 bound (limit sqrt 3)."""
    if q <= 160001:
        return 0.998 * math.sqrt(3), "q<=160001"
    if q <= 321007:
        return 1.05 * math.sqrt(3), "160001<q<=321007"
    lq = math.log(q)
    val = math.sqrt(3 + math.log(lq) / lq) + math.sqrt(1 / (3 * lq * lq)) + 3 / math.sqrt(q * lq)
    return val, "q>321007"


PHI_R2_LIMIT = math.sqrt(3)


def reference_bounds(q: float, r: int, R: int) -> dict:
    """Known comparator bounds for codimension r and radius R at q.

    Only shapes with a published constant are evaluated; the rest report the
    q-dependent growth factor with unit constant.
    """
    out: dict = {"q": q, "r": r, "R": R, "in_range": True, "notes": []}
    lq = math.log(q)
    fl = lambda x: math.floor(x)  # noqa: E731
    if R == 2:
        if r % 2 == 1 and r >= 3 and r not in (9, 13):
            c, case = phi_r2(q)
            out.update(coefficient=c, case=case, limit=PHI_R2_LIMIT)
            out["value"] = c * q ** ((r - 2) / 2) * math.sqrt(lq) + 2 * fl(q ** ((r - 5) / 2))
        else:
            out["in_range"] = False
            out["notes"].append("R=2 bound needs odd r >= 3, r not in {9, 13}")
    elif R == 3 and r % 3 in (1, 2) and r >= 4:
        if r % 3 == 1:
            if 13 <= q <= 4373:
                c = 2.61
            elif 4373 < q <= 7057:
                c = 2.65
            else:
                c = None
            corr = 3 * fl(q ** ((r - 7) / 3)) + 2 * fl(q ** ((r - 10) / 3)) + (1 if r == 13 else 0)
        else:
            if 11 <= q <= 401:
                c = 2.785
            elif 401 < q <= 839:
                c = 2.884
            else:
                c = None
            corr = 3 * fl(q ** ((r - 8) / 3)) + 2 * fl(q ** ((r - 11) / 3)) + (1 if r == 14 else 0)
        out["correction"] = corr
        if c is None:
            out["in_range"] = False
            out["notes"].append("q outside the range of the computer-search constants")
        else:
            out["coefficient"] = c
            out["value"] = c * q ** ((r - 3) / 3) * lq ** (1 / 3) + corr
    else:
        out["in_range"] = False
        out["notes"].append("no published constant for this (r, R)")
    out["direct_sum_order"] = q ** ((r - R) / R + (R - 2) / (2 * R)) * math.sqrt(lq)
    out["lower_bound_order"] = q ** ((r - R) / R)
    out["new_bound_order"] = q ** ((r - R) / R) * lq ** (1 / R)
    return out


# -- Table of constants ---------------------------------------------------

DEFAULT_TABLE_ROWS = (
    (3, 2.35, (5e4, 15e4)),
    (3, 3.0, (5e4, 15e4)),
    (3, None, (5e4, 15e4)),
    (4, 2.2, (5e4, 15e4)),
    (4, 2.5, (15e4,)),
    (4, None, ()),
    (5, 2.3, (5e4, 15e4)),
    (5, 2.5, ()),
    (5, None, ()),
    (6, 2.5, (5e4, 15e4)),
    (6, None, ()),
    (7, 2.95, ()),
    (7, None, ()),
)


def table1(rows=DEFAULT_TABLE_ROWS) -> list[dict]:
    """Rows of (R, lambda) constants; ``lambda=None`` means lambda_min(R)."""
    out = []
    for R, lam, q0s in rows:
        is_min = lam is None
        lam = lambda_min(R) if is_min else lam
        E = math.exp(R - 1)
        row = {
            "R": R,
            "lambda": lam,
            "lambda_is_min": is_min,
            "E": E,
            "upsilon_E": upsilon(lam, R, E),
            "Q": q_of_lambda(lam, R),
            "C": c_of_lambda(lam, R),
            "omega_Q0": {q0: omega(lam, R, q0) for q0 in q0s},
            "D": d_const(lam, R),
        }
        out.append(row)
    return out


def curve(R: int, lam: float, q_from: float, q_to: float, points: int, kind: str = "decreasing") -> list[tuple]:
    """(q, bound, bound / (q ln q)^(1/R)) on a log-spaced grid of q."""
    if points < 2:
        raise BoundError("need at least two points")
    out = []
    a, b = math.log(q_from), math.log(q_to)
    for i in range(points):
        q = math.exp(a + (b - a) * i / (points - 1))
        if kind == "decreasing":
            v = omega(lam, R, q) * qlnq_root(q, R) + 2 * R
        elif kind == "constant":
            v = c_of_lambda(lam, R) * qlnq_root(q, R) + 2 * R
        else:
            raise BoundError(f"unknown curve kind {kind!r}")
        out.append((q, v, v / qlnq_root(q, R)))
    return out


def iteration_cap(q: float, R: int, lam: float) -> int | None:
    """Number of steps after which at most R points stay uncovered.

    None when binom(L, R-1) - 1 > q, where the estimate does not apply.
    """
    L = start_size(lam, R, q)
    if comb(L, R - 1) - 1 > q:
        return None
    b = beta(lam, R, q)
    if b <= 0:
        return None
    val = factorial(R) / b ** (R - 1) * phi_star(lam, R, q, L) * qlnq_root(q, R) - 1
    return math.ceil(val)


def fallback_cap(q: float, R: int) -> int:
    return math.ceil(4 * theta_real(R - 1, q) ** (1 / R) * math.log(q))


def g_hat_bound(q: float, R: int, L: int) -> float:
    """Lower bound on the union size of the affine pieces: q^(R-3) n (q + 1/2 - n/2)."""
    n = comb(L, R - 1)
    return q ** (R - 3) * n * (q + 0.5 - 0.5 * n)
