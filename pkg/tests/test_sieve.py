import pytest

from galprod.curves import CurveModel
from galprod.errors import NoGoodPrimes, SchemaError
from galprod.sieve import CANDIDATE, INHERITED, PROVED, SieveInput, sieve_pair, sieve_product


@pytest.fixture(scope="module")
def example_report(request):
    curves = request.getfixturevalue("fixture_curves")
    return sieve_product(SieveInput(curves[:2], [[2], []], pmax=200))


def by_label(curves, label):
    return next(c for c in curves if c.label == label)


class TestExamplePair:
    def test_product_set(self, example_report):
        assert example_report.product_set == [
            {"ell": 2, "tag": INHERITED, "from": [1]},
            {"ell": 13, "tag": CANDIDATE, "pairs": [[1, 2]]},
        ]

    def test_residual(self, example_report):
        assert example_report.pair_verdicts[0].residual_gcd == 13

    def test_witnesses(self, example_report):
        v = example_report.pair_verdicts[0].per_ell
        assert v[3].tag == PROVED and v[3].witness <= 73
        for ell in (5, 7, 11):
            assert v[ell].tag == PROVED
        assert v[2].tag == INHERITED and v[2].inherited_from == (1,)
        assert v[13].tag == CANDIDATE

    def test_everything_else_proved(self, example_report):
        for ell, verdict in example_report.pair_verdicts[0].per_ell.items():
            if ell not in (2, 13):
                assert verdict.tag == PROVED, ell

    def test_witness_is_valid(self, example_report):
        pv = example_report.pair_verdicts[0]
        for ell, verdict in pv.per_ell.items():
            if verdict.tag == PROVED and ell >= 5:
                a, b = pv.traces[verdict.witness]
                assert verdict.witness != ell
                assert (a - b) % ell and (a + b) % ell

    def test_closing_statement(self, example_report):
        assert "13" in example_report.closing_statement
        assert "ell = 2, 3" not in example_report.closing_statement

    def test_stable_under_larger_pmax(self, fixture_curves, example_report):
        big = sieve_product(SieveInput(fixture_curves[:2], [[2], []], pmax=1000))
        assert big.product_primes == example_report.product_primes == [2, 13]


class TestEdgeCases:
    def test_isogenous_pair_has_zero_residual(self, fixture_curves):
        e, f = by_label(fixture_curves, "11a1"), by_label(fixture_curves, "11a3")
        pv = sieve_pair(e, f, [5], [5], pmax=100, ell_ceiling=50)
        assert pv.residual_gcd == 0
        assert all(v.tag in (CANDIDATE, INHERITED) for ell, v in pv.per_ell.items() if ell >= 5)
        report = sieve_product(SieveInput([e, f], [[5], [5]], pmax=100, ell_ceiling=50))
        assert "no prime ell > 100" in report.closing_statement

    def test_three_curves(self, fixture_curves):
        curves = [fixture_curves[0], fixture_curves[1], by_label(fixture_curves, "37a1")]
        report = sieve_product(SieveInput(curves, [[2], [], []], pmax=200, ell_ceiling=100))
        assert [(pv.i, pv.j) for pv in report.pair_verdicts] == [(1, 2), (1, 3), (2, 3)]
        assert "n > 2" in report.closing_statement
        assert report.product_primes[0] == 2

    def test_inherited_from_both(self, fixture_curves):
        report = sieve_product(SieveInput(fixture_curves[:2], [[2, 7], [7]], pmax=100))
        entry = next(e for e in report.product_set if e["ell"] == 7)
        assert entry == {"ell": 7, "tag": INHERITED, "from": [1, 2]}

    def test_input_validation(self, fixture_curves):
        with pytest.raises(SchemaError):
            SieveInput(fixture_curves[:1], [[]])
        with pytest.raises(SchemaError):
            SieveInput(fixture_curves[:2], [[]])
        with pytest.raises(SchemaError):
            SieveInput([fixture_curves[0], fixture_curves[0]], [[], []])

    def test_no_good_primes(self):
        e = CurveModel.from_ainvs([0, 0, 0, 1, 10], conductor=2 * 5 * 7)
        f = CurveModel.from_ainvs([0, 0, 0, 1, -10], conductor=2)
        with pytest.raises(NoGoodPrimes):
            sieve_pair(e, f, [], [], pmax=7)

    def test_pmax_too_small(self, fixture_curves):
        with pytest.raises(ValueError):
            sieve_pair(fixture_curves[0], fixture_curves[1], [], [], pmax=3)

    def test_json_shape(self, example_report):
        doc = example_report.to_json()
        assert doc["parameters"]["pmax"] == 200
        assert doc["pairs"][0]["verdicts"]["13"] == {"tag": CANDIDATE, "evidence": doc["pairs"][0]["scanned_primes"]}
