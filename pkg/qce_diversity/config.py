"""
Experiment configuration: YAML files of flat keys plus command-line overrides
"""
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
import yaml

from qce_diversity.core.model import Levels, SystemConfig, parse_levels
from qce_diversity.exceptions import ConfigError
from qce_diversity.theory.analytics import MIN_ALPHA_SAMPLES

DEFAULTS: Dict[str, Any] = {
    'total_power': 1.0,
    'trials': 1_000_000,
    'seed': 0,
    'min_errors': 200,
    'workers': 1,
    'out': 'results',
    'alpha_samples': 100_000,
    'fit_window': None,
}
REQUIRED = ('n', 'm', 'l', 'snr_db')
KNOWN_KEYS = set(DEFAULTS) | set(REQUIRED)

# SystemConfig field -> configuration key
_FIELD_KEYS = {
    'n_antennas': 'n',
    'psk_order': 'm',
    'quant_levels': 'l',
    'snr_db': 'snr_db',
    'total_power': 'total_power',
    'trials': 'trials',
    'seed': 'seed',
    'min_errors': 'min_errors',
    'workers': 'workers',
}


class ConfigValues:
    """Merged key/value settings that remember the file line of every key"""

    def __init__(self, values: Optional[Mapping[str, Any]] = None,
                 lines: Optional[Mapping[str, int]] = None, source: Optional[str] = None):
        self.values: Dict[str, Any] = dict(values or {})
        self.lines: Dict[str, int] = dict(lines or {})
        self.source = source

    def override(self, **overrides) -> 'ConfigValues':
        """Return a copy where every non-None override replaces the file value"""
        values = dict(self.values)
        lines = dict(self.lines)
        for key, value in overrides.items():
            if value is None:
                continue
            values[key] = value
            lines.pop(key, None)
        return ConfigValues(values, lines, self.source)

    def get(self, key: str, default=None):
        if key in self.values:
            return self.values[key]
        return DEFAULTS.get(key, default)

    def error(self, key: str, message: str) -> ConfigError:
        return ConfigError(message, field=key, line=self.lines.get(key))


def load_config_file(path) -> ConfigValues:
    """
    Read a YAML configuration file.

    Raises:
        ConfigError: on syntax errors, non-mapping documents or unknown keys
    """
    text = Path(path).read_text(encoding='utf-8')
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, 'problem_mark', None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError(f"invalid YAML: {getattr(e, 'problem', e)}", line=line)

    if data is None:
        return ConfigValues(source=str(path))
    if not isinstance(data, dict) or not isinstance(node, yaml.MappingNode):
        raise ConfigError("configuration must be a mapping of keys to values", line=1)

    lines = {key_node.value: key_node.start_mark.line + 1 for key_node, _ in node.value}
    for key in data:
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key (expected one of {', '.join(sorted(KNOWN_KEYS))})",
                              field=str(key), line=lines.get(key))
    return ConfigValues(data, lines, source=str(path))


def parse_snr_grid(value) -> Tuple[float, ...]:
    """
    SNR grid from a list, a single number, a comma list or an inclusive lo:step:hi range.
    """
    if isinstance(value, (list, tuple)):
        items = list(value)
    elif isinstance(value, (int, float)) and not isinstance(value, bool):
        items = [value]
    elif isinstance(value, str):
        text = value.strip()
        if not text:
            raise ConfigError("SNR grid is empty", field='snr_db')
        if ':' in text:
            return _parse_range(text)
        items = [part for part in text.split(',') if part.strip()]
    else:
        raise ConfigError(f"cannot read an SNR grid from {value!r}", field='snr_db')

    try:
        return tuple(float(v) for v in items)
    except (TypeError, ValueError):
        raise ConfigError(f"SNR values must be numbers, got {value!r}", field='snr_db')


def _parse_range(text: str) -> Tuple[float, ...]:
    parts = text.split(':')
    if len(parts) != 3:
        raise ConfigError(f"expected lo:step:hi, got {text!r}", field='snr_db')
    try:
        lo, step, hi = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"expected numbers in lo:step:hi, got {text!r}", field='snr_db')
    if step <= 0 or hi < lo:
        raise ConfigError(f"range {text!r} must have step > 0 and hi >= lo", field='snr_db')
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return tuple(float(v) for v in np.round(lo + step * np.arange(count), 12))


def parse_levels_list(value) -> List[Levels]:
    """One or more quantization level counts: 5, 'inf', [3, 4, 'inf'] or '3,4,inf'"""
    if isinstance(value, str):
        items = [part for part in value.split(',') if part.strip()]
    elif isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [value]
    if not items:
        raise ConfigError("at least one quantization level count is required", field='l')
    return [parse_levels(item) for item in items]


def parse_fit_window(value) -> Optional[Tuple[float, float]]:
    if value is None:
        return None
    if isinstance(value, str):
        value = [part for part in value.replace(':', ',').split(',') if part.strip()]
    try:
        lo, hi = (float(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigError(f"fit window must be two numbers lo,hi, got {value!r}", field='fit_window')
    if hi < lo:
        raise ConfigError("fit window must satisfy lo <= hi", field='fit_window')
    return lo, hi


def parse_alpha_samples(value) -> int:
    """Bound sample count: 0 (or None) disables the bound columns"""
    if value is None:
        return 0
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ConfigError(f"alpha_samples must be an integer, got {value!r}", field='alpha_samples')
    if value != 0 and value < MIN_ALPHA_SAMPLES:
        raise ConfigError(f"alpha_samples must be 0 or >= {MIN_ALPHA_SAMPLES}, got {value}",
                          field='alpha_samples')
    return int(value)


def load_alpha_samples(values: ConfigValues) -> int:
    try:
        return parse_alpha_samples(values.get('alpha_samples'))
    except ConfigError as e:
        raise values.error('alpha_samples', e.message) from None


def build_system_configs(values: ConfigValues) -> List[SystemConfig]:
    """One SystemConfig per quantization level count, all on the same SNR grid"""
    for key in REQUIRED:
        if values.get(key) is None:
            raise values.error(key, "missing required key")

    try:
        grid = parse_snr_grid(values.get('snr_db'))
        levels = parse_levels_list(values.get('l'))
        configs = [
            SystemConfig(
                n_antennas=values.get('n'),
                psk_order=values.get('m'),
                quant_levels=level,
                snr_grid_db=grid,
                trials=values.get('trials'),
                seed=values.get('seed'),
                total_power=values.get('total_power'),
                min_errors=values.get('min_errors'),
                workers=values.get('workers'),
            )
            for level in levels
        ]
    except ConfigError as e:
        key = _FIELD_KEYS.get(e.field, e.field)
        if e.line is None and key is not None:
            raise values.error(key, e.message) from None
        raise
    return configs
