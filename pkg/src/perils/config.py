"""Scenario configuration files.

Format: UTF-8 text, one ``key = value`` per line, ``#`` starts a comment.
Percent-valued entries may carry a ``%`` suffix (``d = 0.0385%``) and are
stored as fractions. Unknown keys are rejected; missing keys keep defaults.
"""

from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .core_model import ModelParams
from .errors import ConfigError, PerilsError

VARIANTS = ("simplified", "realistic")


@dataclass(frozen=True)
class ScenarioConfig:
    params: ModelParams = ModelParams()
    dx: float = 0.0
    W: float = 16e9
    lam: float = 0.0
    h: float = 0.5625
    onset_year: int | None = None
    variant: str = "simplified"
    forecast_file: str | None = None

    def with_(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        out = asdict(self.params)
        out.update({k: v for k, v in asdict(self).items() if k != "params"})
        return out


_PARAM_TYPES = {f.name: f.type for f in fields(ModelParams)}
_EXTRA_KEYS = {
    "dx": float,
    "W": float,
    "lambda": float,
    "h": float,
    "onset_year": int,
    "variant": str,
    "forecast_file": str,
}


def parse_number(raw, key="value"):
    text = raw.strip().replace("_", "")
    scale = 1.0
    if text.endswith("%"):
        text, scale = text[:-1].strip(), 0.01
    try:
        return float(text) * scale
    except ValueError:
        raise ConfigError(f"{key}: cannot parse number from {raw!r}") from None


def _parse_bool(raw, key):
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _parse_int(raw, key):
    value = parse_number(raw, key)
    if value != int(value):
        raise ConfigError(f"{key}: expected an integer, got {raw!r}")
    return int(value)


def _coerce(key, raw, kind):
    if kind in (bool, "bool"):
        return _parse_bool(raw, key)
    if kind in (int, "int"):
        return _parse_int(raw, key)
    if kind in (str, "str", "str | None"):
        return raw.strip()
    return parse_number(raw, key)


def parse_config_text(text, base=None, source="<config>"):
    """Parse config text into a :class:`ScenarioConfig`, layered on ``base``."""
    cfg = base or ScenarioConfig()
    param_updates, extra_updates = {}, {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key in _PARAM_TYPES:
            param_updates[key] = _coerce(key, raw, _PARAM_TYPES[key])
        elif key in _EXTRA_KEYS:
            name = "lam" if key == "lambda" else key
            extra_updates[name] = _coerce(key, raw, _EXTRA_KEYS[key])
        else:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
    if "variant" in extra_updates and extra_updates["variant"] not in VARIANTS:
        raise ConfigError(f"{source}: variant must be one of {VARIANTS}")
    try:
        params = cfg.params.with_(**param_updates)
        cfg = cfg.with_(params=params, **extra_updates)
    except PerilsError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    if not 0.0 < cfg.h <= 1.0:
        raise ConfigError(f"{source}: h must lie in (0, 1]")
    if cfg.W <= 0:
        raise ConfigError(f"{source}: W must be positive")
    if not 0.0 <= cfg.dx < 1.0:
        raise ConfigError(f"{source}: dx must lie in [0, 1)")
    return cfg


def load_config(path, base=None):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, base=base, source=str(path))
