import pytest
from hypothesis import given
from hypothesis import strategies as st

from perils import calibration as cal
from perils.errors import DomainError, NoRootError


@pytest.fixture(scope="module")
def sf():
    return cal.calibrate_preset("superforecasters")


@pytest.fixture(scope="module")
def de():
    return cal.calibrate_preset("domain_experts")


class TestBuildingBlocks:
    @given(st.floats(0.0, 0.99), st.integers(1, 200))
    def test_annualize_round_trip(self, P, years):
        q = cal.annualize_cumulative(P, years)
        assert 1 - (1 - q) ** years == pytest.approx(P, abs=1e-12)

    def test_annualize_edges(self):
        assert cal.annualize_cumulative(0.0, 10) == 0.0
        with pytest.raises(DomainError):
            cal.annualize_cumulative(1.0, 10)
        with pytest.raises(DomainError):
            cal.annualize_cumulative(0.1, 0)

    def test_interval_rate(self):
        q = cal.interval_annual_rate(0.1, 0.19, 2030, 2031)
        assert q == pytest.approx(0.1)
        with pytest.raises(DomainError):
            cal.interval_annual_rate(0.2, 0.1, 2030, 2050)

    def test_condition_identity_when_p_is_one(self):
        assert cal.condition_on_regime(0.3, 1.0, 50) == 0.3

    def test_condition_rejects_inconsistent(self):
        with pytest.raises(DomainError):
            cal.condition_on_regime(0.9, 0.9, 50)

    def test_zero_forecasts_give_zero_mortality(self):
        out = cal.calibrate(cal.ZERO_RISK, onset_year=2038, rounding="exact", q1_override=0.0)
        assert out.d_baseline == 0.0 and out.d_perils == 0.0

    def test_bucket_probabilities_sum_to_one(self):
        b = cal.bucket_probabilities(0.0058, 0.12, 0.0002286)
        assert sum(b) == pytest.approx(1.0)
        assert cal.expected_annual_mortality(b) == pytest.approx(0.000460, abs=2e-6)

    def test_bad_buckets(self):
        with pytest.raises(DomainError):
            cal.expected_annual_mortality((0.5, 0.2, 0.2, 0.2))

    @given(st.floats(0.0, 1.0))
    def test_catastrophe_share_round_trip(self, c):
        q0, qhat, x, onset = 0.0004, 0.0008, 1.6e-6, 2038
        target = 1.0 - cal.catastrophe_survival(c, q0, qhat, x, onset)
        assert cal.solve_catastrophe_share(target, q0, qhat, x, onset) == pytest.approx(c, abs=1e-7)

    def test_catastrophe_share_no_root(self):
        with pytest.raises(NoRootError):
            cal.solve_catastrophe_share(0.9, 0.0004, 0.0008, 0.0, 2038)

    def test_forecast_set_validates(self):
        with pytest.raises(DomainError):
            cal.ForecastSet("x", {2030: 0.2, 2050: 0.1}, 0, 0, 0, 0, 0)
        with pytest.raises(DomainError):
            cal.ForecastSet("x", {2030: 1.2}, 0, 0, 0, 0, 0)


class TestPresets:
    def test_regime_survival(self, sf, de):
        assert sf.p_regime_annual == pytest.approx(0.9995, abs=1e-4)
        assert de.p_regime_annual == pytest.approx(0.9954, abs=1e-4)

    def test_conditional_forecasts(self, sf, de):
        for got, want in ((sf, (0.0025, 0.0152, 0.0416)), (de, (0.0126, 0.0906, 0.1462))):
            for y, w in zip((2030, 2050, 2100), want):
                assert got.conditional[y] == pytest.approx(w, abs=1e-3)

    def test_rates(self, sf, de):
        assert sf.q0 == pytest.approx(0.0004) and de.q0 == pytest.approx(0.0018)
        assert sf.q1 == pytest.approx(0.0008) and de.q1 == pytest.approx(0.0058)
        assert de.q1_formula == pytest.approx(0.0054, abs=1e-4)

    def test_extinction_rates(self, sf, de):
        assert sf.x_annual == pytest.approx(0.0000016, rel=0.05)
        assert de.x_annual == pytest.approx(0.0002286, rel=0.05)

    def test_catastrophe_share(self, sf, de):
        assert sf.c == pytest.approx(0.16, abs=0.01)
        assert de.c == pytest.approx(0.12, abs=0.01)

    @pytest.mark.parametrize(
        "name,base,perils",
        [("superforecasters", 0.000020, 0.000041), ("domain_experts", 0.000075, 0.000460)],
    )
    def test_expected_mortality(self, name, base, perils):
        out = cal.calibrate_preset(name)
        assert out.d_baseline == pytest.approx(base, abs=2e-6)
        assert out.d_perils == pytest.approx(perils, abs=2e-6)

    def test_exact_mode_close_to_display_mode(self, sf):
        exact = cal.calibrate_preset("superforecasters", rounding="exact")
        assert exact.d_excess == pytest.approx(sf.d_excess, rel=0.2)

    def test_unknown_preset(self):
        with pytest.raises(DomainError):
            cal.calibrate_preset("oracle")

    def test_onset_outside_window(self):
        with pytest.raises(DomainError, match="q1"):
            cal.calibrate(cal.SUPERFORECASTERS, onset_year=2060)


class TestAnnualRates:
    @pytest.mark.parametrize(
        "fs,natural,want",
        [
            (cal.SUPERFORECASTERS, False, (0.0004, 0.0006, 0.0005)),
            (cal.DOMAIN_EXPERTS, False, (0.0018, 0.0035, 0.0005)),
            (cal.SUPERFORECASTERS, True, (0.0007, 0.0006, 0.0004)),
            (cal.DOMAIN_EXPERTS, True, (0.0014, 0.0021, 0.0007)),
        ],
    )
    def test_table(self, fs, natural, want):
        got = [v for _, v in sorted(cal.annual_rate_table(fs, natural).items())]
        for g, w in zip(got, want):
            assert g == pytest.approx(w, abs=1e-4)


class TestForecastFile:
    def test_round_trip(self, tmp_path):
        fs = cal.SUPERFORECASTERS
        lines = ["key,value", "group,sf-copy"]
        lines += [f"pandemic_by_{y},{v * 100}%" for y, v in fs.pandemic_by.items()]
        for k in ("catastrophe_by_2100", "extinction_by_2100", "total_extinction_by_2100", "bio_extinction_by_2100", "tai_prob"):
            lines.append(f"{k},{getattr(fs, k)}")
        path = tmp_path / "f.csv"
        path.write_text("\n".join(lines) + "\n")
        got = cal.read_forecast_file(path)
        assert got.group == "sf-copy"
        a = cal.calibrate(got, 2038)
        b = cal.calibrate(fs, 2038)
        assert a.q0 == b.q0 and a.x_annual == pytest.approx(b.x_annual)

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("mystery,0.1\n")
        with pytest.raises(DomainError, match="unknown key"):
            cal.read_forecast_file(path)
