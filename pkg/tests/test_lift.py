from itertools import combinations

import numpy as np
import pytest

from covercode.codes import ParityCheck, covering_radius, covering_radius_bruteforce, identity_code, set_to_parity_check
from covercode.gf import field_of_order
from covercode.lift import LiftError, LiftSpec, chain_bound, lift_qm, nrc_multipliers, verify_family
from covercode.pg import normal_rational_curve, pg_space, rank_of, theta


def test_identity_gf3_m1(F3):
    spec = LiftSpec(identity_code(3, F3), 1, 3)
    H = lift_qm(spec)
    assert (H.r, H.n) == (6, 12) == (spec.r, spec.n)
    assert covering_radius(H).radius == 3


def test_identity_gf3_m1_bruteforce_oracle(F3):
    H = lift_qm(LiftSpec(identity_code(3, F3), 1, 3))
    assert covering_radius_bruteforce(H, max_weight=3) == 3


def test_padded_length(F3):
    spec = LiftSpec(identity_code(3, F3), 1, 3, pad_to_paper_length=True)
    H = lift_qm(spec)
    assert (H.r, H.n) == (6, 21)
    assert covering_radius(H).radius == 3


def test_parameter_law():
    F = field_of_order(5)
    H0 = identity_code(4, F)
    assert LiftSpec(H0, 2, 3).r == 10


def test_stated_length_example():
    F = field_of_order(4)
    H0 = set_to_parity_check(normal_rational_curve(pg_space(3, F)), F)
    spec = LiftSpec(H0, 1, 3, pad_to_paper_length=True)
    H = lift_qm(spec)
    assert (H.n, H.r) == (35, 7)


@pytest.mark.parametrize("q,r0,n0,R,m", [(2, 3, 3, 3, 1), (2, 3, 3, 3, 2), (3, 3, 3, 3, 2), (4, 2, 3, 2, 1),
                                          (4, 2, 5, 2, 2), (3, 2, 4, 2, 2)])
def test_length_laws_and_radius(q, r0, n0, R, m):
    F = field_of_order(q)
    rng = np.random.default_rng(q + 7 * m)
    while True:
        H0 = ParityCheck(F, rng.integers(0, q, size=(r0, n0)))
        if H0.full_rank():
            break
    R0 = covering_radius(H0).radius
    R = max(R, R0)
    spec = LiftSpec(H0, m, R)
    H = lift_qm(spec)
    assert H.r == r0 + R * m
    assert H.n == n0 * q**m + R * theta(m - 1, q)
    assert H.full_rank()
    rad = covering_radius(H).radius
    assert rad <= R
    pad = lift_qm(LiftSpec(H0, m, R, pad_to_paper_length=True))
    assert pad.n - H.n == R * q**m
    assert pad.n == n0 * q**m + R * theta(m, q)
    assert covering_radius(pad).radius == rad


def test_type_a_blocks(F3):
    H0 = identity_code(3, F3)
    H = lift_qm(LiftSpec(H0, 2, 3))
    Q = 9
    for i in range(3):
        block = H.matrix[:, i * Q : (i + 1) * Q]
        assert np.all(block[:3] == H0.matrix[:, [i]])
        # xi = 0 column is (h_i; 0; ...; 0)
        assert np.all(block[3:, 0] == 0)
        # each lower block with nonzero multiplier runs through all of GF(9)
        for k in range(3):
            sub = block[3 + 2 * k : 5 + 2 * k]
            if np.any(sub):
                assert len({tuple(c) for c in sub.T}) == Q


def test_multipliers_independent():
    for q, R, n0 in [(3, 3, 4), (5, 3, 6), (4, 4, 5), (2, 4, 4), (2, 3, 3)]:
        F = field_of_order(q)
        mu = nrc_multipliers(n0, R, F)
        k = min(R, n0)
        assert all(rank_of(c, F) == k for c in combinations(mu, k))
    with pytest.raises(LiftError):
        nrc_multipliers(5, 3, field_of_order(2))


def test_errors(F3):
    with pytest.raises(LiftError):
        LiftSpec(identity_code(3, F3), 0, 3)
    with pytest.raises(LiftError):
        LiftSpec(ParityCheck(F3, np.array([[1, 1], [0, 0]])), 1, 2)
    with pytest.raises(LiftError):
        LiftSpec(ParityCheck(F3, np.eye(3, 5, dtype=int) + np.eye(3, 5, k=2, dtype=int)), 1, 3)


def test_family_identity(F3):
    rep = verify_family(identity_code(3, F3), [1, 2], 3, check_padded=True)
    assert [i.radius for i in rep.instances] == [3, 3]
    assert [i.n for i in rep.instances] == [12, 39]
    assert [i.radius_padded for i in rep.instances] == [3, 3]
    assert rep.ok


def test_chain_bound_algebra():
    # with r0 = R + 1 the bound equals n0 q^m + R q^(m+1)/(q-1)
    for q, n0, R, m in [(5, 6, 3, 1), (7, 8, 3, 2), (13, 12, 4, 1)]:
        phi, rhs = chain_bound(n0, R + 1 + R * m, q, R)
        assert rhs == pytest.approx(n0 * q**m + R * q ** (m + 1) / (q - 1))
        assert n0 * q**m + R * theta(m, q) < rhs


def test_manifest(F3):
    text = LiftSpec(identity_code(3, F3), 1, 3).manifest()
    assert "n0: 3" in text and "mu: " in text and "padded: false" in text
