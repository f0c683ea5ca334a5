"""Network configuration: defaults, unit-aware parsing and validation.

All values are stored in SI / linear units. dB-annotated inputs are converted
exactly once, when the configuration is parsed.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping

SPEED_OF_LIGHT = 3e8  # m/s
BOLTZMANN = 1.380649e-23  # J/K


class ConfigError(ValueError):
    """Invalid configuration entry (bad syntax, unknown key or out-of-range value)."""

    def __init__(self, key: str, value: Any, reason: str):
        self.key = key
        self.value = value
        super().__init__(f"{key} = {value!r}: {reason}")


def db_to_lin(db: float) -> float:
    return 10.0 ** (db / 10.0)


def lin_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def dbm_to_w(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def w_to_dbm(w: float) -> float:
    return 10.0 * math.log10(w) + 30.0


@dataclass(frozen=True)
class NetworkParams:
    total_power_w: float = 10.0
    sensing_power_ratio: float = 0.5
    num_sus: int = 100
    altitude_m: float = 150.0
    guard_radius_m: float = 10.0
    carrier_hz: float = 24e9
    bandwidth_hz: float = 100e6
    num_subcarriers: int = 64
    num_symbols: int = 16
    comm_noise_w: float = dbm_to_w(-94.0)
    noise_figure: float = 10.0
    standard_temp_k: float = 290.0
    boltzmann: float = BOLTZMANN
    mean_rcs_m2: float = 1.0
    prop_loss: float = 1.0
    path_loss_exp: float = 2.6
    rician_k: float = 10.0
    max_outage: float = 0.1
    max_false_alarm: float = 1e-8
    min_detection: float = 0.99999999
    data_rate_bps: float = 8e6  # 1 MB/s
    tx_sense_gain: float = 128.0
    rx_sense_gain: float = 128.0
    tx_comm_gain: float = 8.0
    rx_comm_gain: float = 8.0
    snr_threshold: float = 2.0
    detect_time_s: float = 1.0
    # antenna geometry
    sena_layers: int = 17
    sena_ring_size: int = 16
    coma_elements: int = 16

    def __post_init__(self):
        def check(key, ok, reason):
            if not ok:
                raise ConfigError(key, getattr(self, key), reason)

        check("sensing_power_ratio", 0.0 <= self.sensing_power_ratio <= 1.0, "must lie in [0, 1]")
        for key in ("num_sus", "num_subcarriers", "num_symbols", "sena_layers", "coma_elements"):
            v = getattr(self, key)
            check(key, isinstance(v, int) and v >= 1, "must be a positive integer")
        rs = self.sena_ring_size
        check("sena_ring_size", isinstance(rs, int) and rs >= 2 and rs & (rs - 1) == 0,
              "must be a power of two >= 2")
        for key in ("total_power_w", "altitude_m", "guard_radius_m", "carrier_hz", "bandwidth_hz",
                    "comm_noise_w", "noise_figure", "standard_temp_k", "boltzmann", "mean_rcs_m2",
                    "prop_loss", "path_loss_exp", "data_rate_bps", "tx_sense_gain", "rx_sense_gain",
                    "tx_comm_gain", "rx_comm_gain", "snr_threshold", "detect_time_s"):
            v = getattr(self, key)
            check(key, math.isfinite(v) and v > 0, "must be finite and > 0")
        check("rician_k", math.isfinite(self.rician_k) and self.rician_k >= 0, "must be >= 0")
        for key in ("max_outage", "max_false_alarm", "min_detection"):
            check(key, 0.0 < getattr(self, key) < 1.0, "must lie strictly inside (0, 1)")
        check("max_false_alarm", self.max_false_alarm < self.min_detection,
              "must be below min_detection")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz

    @property
    def processing_gain(self) -> int:
        return self.num_subcarriers * self.num_symbols

    @property
    def sensing_power_w(self) -> float:
        return self.sensing_power_ratio * self.total_power_w

    @property
    def comm_power_w(self) -> float:
        return (1.0 - self.sensing_power_ratio) * self.total_power_w

    @property
    def comm_gain(self) -> float:
        return self.tx_comm_gain * self.rx_comm_gain

    def at(self, beta: float | None = None, m: int | None = None) -> NetworkParams:
        """Copy with a different operating point (sensing power ratio, fleet size)."""
        changes = {}
        if beta is not None:
            changes["sensing_power_ratio"] = float(beta)
        if m is not None:
            changes["num_sus"] = int(m)
        return replace(self, **changes)

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True, default=repr)
        return hashlib.sha256(blob.encode()).hexdigest()


def sensing_noise_w(p: NetworkParams) -> float:
    """Thermal noise power at the sensing receiver, k*T0*F*B."""
    return p.boltzmann * p.standard_temp_k * p.noise_figure * p.bandwidth_hz


# ---------------------------------------------------------------------------
# parsing

_UNIT_CLASS = {
    "total_power_w": "power",
    "comm_noise_w": "power",
    "altitude_m": "length",
    "guard_radius_m": "length",
    "carrier_hz": "freq",
    "bandwidth_hz": "freq",
    "standard_temp_k": "temp",
    "mean_rcs_m2": "area",
    "data_rate_bps": "rate",
    "detect_time_s": "time",
    "noise_figure": "ratio",
    "prop_loss": "ratio",
    "rician_k": "ratio",
    "tx_sense_gain": "ratio",
    "rx_sense_gain": "ratio",
    "tx_comm_gain": "ratio",
    "rx_comm_gain": "ratio",
    "snr_threshold": "ratio",
}

_SCALE = {
    "length": {"m": 1.0, "km": 1e3},
    "freq": {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9},
    "temp": {"k": 1.0},
    "area": {"m2": 1.0, "m^2": 1.0},
    "rate": {"bps": 1.0, "b/s": 1.0, "kbps": 1e3, "kb/s": 1e3, "mbps": 1e6, "mb/s": 1e6,
             "gbps": 1e9, "bytes/s": 8.0, "kbytes/s": 8e3, "mbytes/s": 8e6},
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6},
    "power": {"w": 1.0, "mw": 1e-3, "kw": 1e3},
    "ratio": {},
}

_VALUE_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")
_FIELD_TYPES = {f.name: f.type for f in fields(NetworkParams)}


def _parse_value(key: str, raw: Any) -> float | int:
    if key not in _FIELD_TYPES:
        raise ConfigError(key, raw, "unknown key")
    is_int = _FIELD_TYPES[key] in ("int", int)
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return int(raw) if is_int else float(raw)
    m = _VALUE_RE.match(str(raw))
    if m is None:
        raise ConfigError(key, raw, "cannot parse number")
    number, unit = float(m.group(1)), m.group(2)
    if is_int:
        if unit or not number.is_integer():
            raise ConfigError(key, raw, "expected a bare integer")
        return int(number)
    if not unit:
        return number
    cls = _UNIT_CLASS.get(key)
    if cls is None:
        raise ConfigError(key, raw, "this key takes no unit")
    # Byte rates keep their case-sensitive B ("MB/s" is megabytes).
    if cls == "rate" and re.fullmatch(r"[kMG]?B/s", unit):
        return number * {"": 8.0, "k": 8e3, "M": 8e6, "G": 8e9}[unit[:-3]]
    u = unit.lower()
    if cls == "power":
        # A bare "dB" on a power is read as dBm (receiver-noise convention).
        if u in ("dbm", "db"):
            return dbm_to_w(number)
        if u == "dbw":
            return db_to_lin(number)
    if cls == "ratio":
        if u == "db":
            return db_to_lin(number)
        raise ConfigError(key, raw, f"unknown unit {unit!r} for a dimensionless value")
    scale = _SCALE[cls].get(u)
    if scale is None:
        raise ConfigError(key, raw, f"unknown unit {unit!r}")
    return number * scale


def parse_config_text(text: str) -> dict[str, float | int]:
    values: dict[str, float | int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", line, "expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        values[key] = _parse_value(key, raw)
    return values


def from_config(source: str | Mapping[str, Any] | None = None) -> NetworkParams:
    """Build validated parameters from ``key = value`` text or a mapping.

    Missing keys take the defaults; an empty source gives the default scenario.
    """
    if source is None:
        return NetworkParams()
    if isinstance(source, Mapping):
        values = {k: _parse_value(k, v) for k, v in source.items()}
    else:
        values = parse_config_text(source)
    return NetworkParams(**values)


def load_config(path: str | Path | None) -> NetworkParams:
    if path is None:
        return NetworkParams()
    return from_config(Path(path).read_text())
