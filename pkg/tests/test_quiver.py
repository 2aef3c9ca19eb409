import json
import random

import pytest

from conftest import random_poly
from hallvertex.algebra import MPoly, root, symmetrize
from hallvertex.quiver import (
    CohClass,
    InvarianceError,
    Quiver,
    euler_form,
    hilbert_series,
    invariant_monomial_count,
    theta_factors,
)


def form_set(wc_part):
    return sorted((str(f), w) for f, w in wc_part)


def test_theta_a1(A1):
    th = theta_factors(A1, (1,), (1,), -1)
    assert form_set(th.even) == [("-x1_v + y1_v", -1)]
    assert th.odd == ()


def test_theta_jordan(J):
    th = theta_factors(J, (1,), (1,), -1)
    assert form_set(th.even) == [("-x1_v + y1_v", -1)]
    assert form_set(th.odd) == [("-x1_v + y1_v", -1)]


def test_theta_a1_rectangular(A1):
    th = theta_factors(A1, (2,), (1,), 1)
    assert form_set(th.even) == [("-x1_v + y1_v", 1), ("-x2_v + y1_v", 1)]
    assert th.odd == ()


def test_euler_form_examples(A1, J, K):
    assert euler_form(A1, (1,), (1,)) == 1
    assert euler_form(J, (1,), (1,)) == 0
    assert euler_form(K, (1, 0), (0, 1)) == -2


def test_theta_rank_matches_euler_form(rng):
    for _ in range(25):
        n = rng.randint(1, 3)
        nodes = tuple(f"n{i}" for i in range(n))
        arrows = tuple(
            tuple(rng.randint(0, 2) for _ in range(n)) for _ in range(n)
        )
        Q = Quiver(nodes, arrows)
        g1 = tuple(rng.randint(0, 2) for _ in range(n))
        g2 = tuple(rng.randint(0, 2) for _ in range(n))
        th = theta_factors(Q, g1, g2, -1)
        assert th.rank == euler_form(Q, g1, g2)


def test_cohclass_rejects_noninvariant(A1):
    x1 = MPoly.var(root("v", 1, 1))
    with pytest.raises(InvarianceError):
        CohClass(A1, (2,), x1)
    # symmetrizing always passes
    sym = symmetrize(x1, [[root("v", 1, 1), root("v", 1, 2)]])
    CohClass(A1, (2,), sym)


def test_cohclass_rejects_foreign_variables(A1):
    with pytest.raises(ValueError):
        CohClass(A1, (1,), MPoly.var(root("v", 1, 2)))


def test_hilbert_series_examples():
    assert hilbert_series((1,), 4) == (1, 0, 1, 0, 1)
    assert hilbert_series((0,), 4) == (1, 0, 0, 0, 0)
    assert hilbert_series((2,), 4) == (1, 0, 1, 0, 2)


def test_hilbert_series_counts_invariant_monomials():
    for gq in range(0, 4):
        series = hilbert_series((gq,), 10)
        for d in range(0, 11):
            expected = invariant_monomial_count(gq, d // 2) if d % 2 == 0 else 0
            assert series[d] == expected


def test_hilbert_series_multinode():
    series = hilbert_series((1, 2), 6)
    # product over nodes of the single-node series
    a = hilbert_series((1,), 6)
    b = hilbert_series((2,), 6)
    conv = [sum(a[i] * b[d - i] for i in range(d + 1)) for d in range(7)]
    assert list(series) == conv


def test_quiver_json_roundtrip(K, tmp_path):
    path = tmp_path / "k.json"
    path.write_text(json.dumps(K.to_json()))
    assert Quiver.load(str(path)) == K


def test_factor_multiset_and_negation(J):
    th = theta_factors(J, (1,), (1,), -1)
    neg = th.negated_forms()
    assert form_set(neg.even) == [("x1_v - y1_v", -1)]
    assert th.rank == neg.rank == 0
