import pytest

from perils.config import ScenarioConfig, load_config, parse_config_text, parse_number
from perils.errors import ConfigError


def test_percent_suffix():
    assert parse_number("0.0385%") == pytest.approx(0.000385)
    assert parse_number("1_000") == 1000.0
    with pytest.raises(ConfigError):
        parse_number("lots")


def test_defaults_when_empty():
    assert parse_config_text("") == ScenarioConfig()


def test_parses_all_kinds():
    cfg = parse_config_text(
        """
        # scenario
        d = 0.0385%   # domain experts
        T = 60
        t1 = 10
        log_growth = false
        dx = 0.02286%
        lambda = 500
        h = 0.5
        variant = realistic
        onset_year = 2037
        """
    )
    assert cfg.params.d == pytest.approx(0.000385)
    assert cfg.params.T == 60 and isinstance(cfg.params.T, int)
    assert cfg.params.log_growth is False
    assert cfg.lam == 500.0 and cfg.h == 0.5 and cfg.variant == "realistic"
    assert cfg.onset_year == 2037


@pytest.mark.parametrize(
    "text",
    [
        "colour = blue",
        "d = 2",
        "T = 7.5",
        "log_growth = maybe",
        "variant = fancy",
        "h = 0",
        "W = -1",
        "just words",
    ],
)
def test_rejects(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_layering():
    base = parse_config_text("d = 0.001\nT = 50")
    cfg = parse_config_text("T = 60", base=base)
    assert cfg.params.d == 0.001 and cfg.params.T == 60


def test_load_missing(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.cfg")


def test_to_dict_has_everything():
    d = ScenarioConfig().to_dict()
    assert {"p", "G", "d", "dx", "lam", "h", "variant"} <= d.keys()
