import json

import numpy as np
import pytest

from labelenhance.errors import DataError
from labelenhance.metrics import (
    average_ranks,
    canberra,
    chebyshev,
    clark,
    cosine,
    intersection,
    kl,
    report,
)


def random_pairs(seed, count, q=4):
    rng = np.random.default_rng(seed)
    return rng.dirichlet(np.ones(q), size=count), rng.dirichlet(np.ones(q), size=count)


def test_chebyshev_examples():
    assert chebyshev([0.5, 0.5], [1.0, 0.0]) == pytest.approx(0.5)
    assert chebyshev([0.2, 0.8], [0.2, 0.8]) == 0.0


def test_clark_examples():
    assert clark([0.3, 0.7], [0.3, 0.7]) == 0.0
    assert clark([1.0, 0.0], [0.0, 1.0]) == pytest.approx(np.sqrt(2.0))


def test_clark_matches_loop_oracle():
    d, d_hat = random_pairs(0, 1)
    expected = np.sqrt(sum((a - b) ** 2 / (a + b) ** 2 for a, b in zip(d[0], d_hat[0])))
    assert clark(d[0], d_hat[0]) == pytest.approx(expected, abs=1e-12)


def test_canberra_examples():
    assert canberra([0.5, 0.5], [0.0, 1.0]) == pytest.approx(4.0 / 3.0)
    assert canberra([0.4, 0.6], [0.4, 0.6]) == 0.0
    assert canberra([1.0, 0.0], [0.0, 1.0]) == pytest.approx(2.0)


def test_kl_examples():
    assert kl([0.25, 0.75], [0.25, 0.75]) == pytest.approx(0.0, abs=1e-15)
    assert kl([1.0, 0.0], [0.5, 0.5]) == pytest.approx(np.log(2.0))


def test_kl_infinite_divergence():
    with pytest.raises(DataError, match="infinite divergence"):
        kl([1.0, 0.0], [0.0, 1.0])


def test_cosine_examples():
    assert cosine([0.3, 0.7], [0.3, 0.7]) == pytest.approx(1.0)
    assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0


def test_cosine_zero_vector():
    with pytest.raises(DataError, match="zero vector"):
        cosine([0.0, 0.0], [0.5, 0.5])


def test_cosine_matches_loop_oracle():
    d, d_hat = random_pairs(1, 1)
    num = sum(a * b for a, b in zip(d[0], d_hat[0]))
    den = np.sqrt(sum(a * a for a in d[0])) * np.sqrt(sum(b * b for b in d_hat[0]))
    assert cosine(d[0], d_hat[0]) == pytest.approx(num / den, abs=1e-12)


def test_intersection_examples():
    assert intersection([0.3, 0.7], [0.5, 0.5]) == pytest.approx(0.8)
    assert intersection([0.25, 0.75], [0.25, 0.75]) == pytest.approx(1.0)
    assert intersection([1.0, 0.0], [0.0, 1.0]) == 0.0


def test_length_mismatch():
    for fn in (chebyshev, clark, canberra, kl, cosine, intersection):
        with pytest.raises(DataError, match="length mismatch"):
            fn([0.5, 0.5], [0.2, 0.3, 0.5])


def test_zero_denominator_terms_contribute_zero():
    assert clark([0.0, 0.5, 0.5], [0.0, 0.5, 0.5]) == 0.0
    assert canberra([0.0, 0.5, 0.5], [0.0, 0.4, 0.6]) == pytest.approx(0.1 / 0.9 + 0.1 / 1.1)


def test_report_identical_matrices():
    D, _ = random_pairs(2, 10)
    rep = report(D, D)
    assert rep.chebyshev == 0.0
    assert rep.kl == pytest.approx(0.0, abs=1e-14)
    assert rep.cosine == pytest.approx(1.0)
    assert rep.intersection == pytest.approx(1.0)
    assert rep.n_instances == 10


def test_report_single_row_equals_metrics():
    D, P = random_pairs(3, 1)
    rep = report(D, P)
    assert rep.chebyshev == pytest.approx(chebyshev(D[0], P[0]))
    assert rep.kl == pytest.approx(kl(D[0], P[0]))


def test_report_two_rows_average():
    D, P = random_pairs(4, 2)
    rep = report(D, P)
    expected = 0.5 * (chebyshev(D[0], P[0]) + chebyshev(D[1], P[1]))
    assert rep.chebyshev == pytest.approx(expected)


def test_report_propagates_row_index():
    D = np.array([[0.5, 0.5], [1.0, 0.0]])
    P = np.array([[0.5, 0.5], [0.0, 1.0]])
    with pytest.raises(DataError, match="row 2"):
        report(D, P)


def test_report_shape_mismatch():
    with pytest.raises(DataError, match="shape mismatch"):
        report(np.ones((2, 3)) / 3.0, np.ones((3, 3)) / 3.0)


def test_report_serializes_flat_json(tmp_path):
    D, P = random_pairs(5, 4)
    rep = report(D, P)
    path = tmp_path / "report.json"
    rep.save(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    assert set(data) == {
        "chebyshev", "clark", "canberra", "kl", "cosine", "intersection", "n_instances",
    }
    assert data["chebyshev"] == rep.chebyshev


def test_average_ranks_single_method():
    assert average_ranks({"only": [0.1, 0.2, 0.3]}) == {"only": 1.0}


def test_average_ranks_dominance():
    scores = {"a": [0.1] * 12, "b": [0.2] * 12}
    ranks = average_ranks(scores, higher_is_better=False)
    assert ranks == {"a": 1.0, "b": 2.0}
    flipped = average_ranks(scores, higher_is_better=True)
    assert flipped == {"a": 2.0, "b": 1.0}


def test_average_ranks_ties_share_mean():
    ranks = average_ranks({"a": [0.1, 0.5], "b": [0.2, 0.5]})
    assert ranks["a"] == pytest.approx((1.0 + 1.5) / 2)
    assert ranks["b"] == pytest.approx((2.0 + 1.5) / 2)


def test_average_ranks_errors():
    with pytest.raises(DataError):
        average_ranks({})
    with pytest.raises(DataError):
        average_ranks({"a": [0.1, 0.2], "b": [0.3]})


def test_metric_axioms_random():
    D, P = random_pairs(6, 200)
    for d, p in zip(D, P):
        assert chebyshev(d, p) >= 0.0
        assert clark(d, p) >= 0.0
        assert canberra(d, p) >= 0.0
        assert kl(d, p) >= -1e-12
        # symmetry
        assert chebyshev(d, p) == pytest.approx(chebyshev(p, d), abs=1e-12)
        assert clark(d, p) == pytest.approx(clark(p, d), abs=1e-12)
        assert canberra(d, p) == pytest.approx(canberra(p, d), abs=1e-12)
        assert cosine(d, p) == pytest.approx(cosine(p, d), abs=1e-12)
        assert intersection(d, p) == pytest.approx(intersection(p, d), abs=1e-12)
        # intersection L1 identity
        l1 = 1.0 - 0.5 * np.sum(np.abs(d - p))
        assert intersection(d, p) == pytest.approx(l1, abs=1e-12)


def test_kl_asymmetry_witness():
    d, p = [0.9, 0.1], [0.5, 0.5]
    assert abs(kl(d, p) - kl(p, d)) > 1e-3
