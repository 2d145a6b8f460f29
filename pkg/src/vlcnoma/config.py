"""Flat key-value experiment configuration.

Files hold one ``key = value`` per line with ``#`` comments.  Unknown keys
are hard errors so typos cannot silently fall back to defaults.  Every key
has a default matching the bundled reference scenario (``default.cfg``),
including the externally supplied channel-gain override used when
reproducing the reference results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .channel import ChannelGains, OpticalFrontEnd, ScenarioGeometry, gain_matrix
from .constellation import SpectralEfficiencies
from .errors import ConfigError, ParameterError
from .montecarlo import SweepConfig


def _parse_bool(text: str) -> bool:
    if text.lower() in ("true", "1", "yes"):
        return True
    if text.lower() in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_schemes(text: str) -> tuple[str, ...]:
    items = tuple(part.strip() for part in text.split(",") if part.strip())
    if not items:
        raise ValueError("empty scheme list")
    return items


def _parse_snr_points(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(":"))


# key -> (parser, default). None defaults mean "absent unless configured".
SCHEMA: dict[str, tuple] = {
    "room_height_m": (float, 4.0),
    "cell_radius_m": (float, 3.6),
    "rx_height_u1_m": (float, 0.5),
    "rx_height_u2_m": (float, 0.5),
    "rx_height_u3_m": (float, 1.0),
    "r11_m": (float, 0.4885),
    "r21_m": (float, 3.2880),
    "r22_m": (float, 3.4670),
    "r32_m": (float, 0.3030),
    "semi_angle_deg": (float, 60.0),
    "fov_deg": (float, 60.0),
    "filter_gain": (float, 1.0),
    "responsivity_a_per_w": (float, 0.4),
    "detector_area_m2": (float, 1e-4),
    "concentrator_index": (float, 1.5),
    "gain_h11": (float, None),
    "gain_h21": (float, None),
    "gain_h22": (float, None),
    "gain_h32": (float, None),
    "bpcu_u1": (int, 3),
    "bpcu_u2": (int, 2),
    "bpcu_u3": (int, 2),
    "target_power_w": (float, 1.0),
    "snr_start_db": (float, 100.0),
    "snr_stop_db": (float, 150.0),
    "snr_step_db": (float, 2.0),
    # explicit grid; wins over start/stop/step when present (exact echo replay)
    "snr_points_db": (_parse_snr_points, None),
    "trials_per_point": (int, 100_000),
    "seed": (int, 1),
    "min_errors": (int, 0),
    "batch_size": (int, 1 << 15),
    "schemes": (_parse_schemes, ("noma-sic",)),
}

GAIN_KEYS = ("gain_h11", "gain_h21", "gain_h22", "gain_h32")


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated scenario, efficiencies, and sweep settings."""

    geometry: ScenarioGeometry
    front_end: OpticalFrontEnd
    gain_override: ChannelGains | None
    bpcu: SpectralEfficiencies
    target_power_w: float
    sweep: SweepConfig

    def computed_gains(self) -> ChannelGains:
        return gain_matrix(self.geometry, self.front_end)

    def effective_gains(self) -> ChannelGains:
        """Override when configured, otherwise the computed matrix."""
        if self.gain_override is not None:
            return self.gain_override
        return self.computed_gains()


def default_config_path() -> Path:
    return Path(str(resources.files("vlcnoma").joinpath("default.cfg")))


def snr_grid(start_db: float, stop_db: float, step_db: float) -> tuple[float, ...]:
    """Inclusive arithmetic SNR grid, robust to floating-point step error."""
    if step_db <= 0:
        raise ConfigError(f"snr_step_db must be > 0, got {step_db}")
    if stop_db < start_db:
        raise ConfigError(f"snr_stop_db {stop_db} is below snr_start_db {start_db}")
    count = int(math.floor((stop_db - start_db) / step_db + 1e-9)) + 1
    return tuple(start_db + k * step_db for k in range(count))


def parse_kv_file(path) -> dict[str, str]:
    """Raw key/value strings from a flat config file; strict about shape."""
    values: dict[str, str] = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in SCHEMA:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"{path}:{lineno}: empty value for {key!r}")
        values[key] = value
    return values


def build_config(raw: dict[str, str], source: str = "<config>") -> ExperimentConfig:
    """Typed, validated config from raw strings; defaults fill missing keys."""
    typed: dict[str, object] = {}
    for key, (parser, default) in SCHEMA.items():
        if key in raw:
            try:
                typed[key] = parser(raw[key])
            except ValueError as exc:
                raise ConfigError(f"{source}: bad value for {key!r}: {exc}") from exc
        else:
            typed[key] = default

    present = [key for key in GAIN_KEYS if typed[key] is not None]
    if present and len(present) != len(GAIN_KEYS):
        missing = sorted(set(GAIN_KEYS) - set(present))
        raise ConfigError(f"{source}: gain override needs all four gains, missing {missing}")
    override = None
    if present:
        for key in GAIN_KEYS:
            if typed[key] <= 0:
                raise ConfigError(f"{source}: {key} must be > 0, got {typed[key]}")
        override = ChannelGains(*(typed[key] for key in GAIN_KEYS))

    def domain(cls, kwargs):
        # domain-type validators already name the offending key
        try:
            return cls(**kwargs)
        except ParameterError as exc:
            raise ConfigError(f"{source}: {exc}") from exc

    geometry = domain(ScenarioGeometry, dict(
        room_height_m=typed["room_height_m"],
        cell_radius_m=typed["cell_radius_m"],
        rx_heights_m=(typed["rx_height_u1_m"], typed["rx_height_u2_m"], typed["rx_height_u3_m"]),
        r11_m=typed["r11_m"],
        r21_m=typed["r21_m"],
        r22_m=typed["r22_m"],
        r32_m=typed["r32_m"],
    ))
    front_end = domain(OpticalFrontEnd, dict(
        semi_angle_deg=typed["semi_angle_deg"],
        detector_area_m2=typed["detector_area_m2"],
        responsivity_a_per_w=typed["responsivity_a_per_w"],
        filter_gain=typed["filter_gain"],
        fov_deg=typed["fov_deg"],
        concentrator_index=typed["concentrator_index"],
    ))
    bpcu = domain(SpectralEfficiencies, dict(
        u1=typed["bpcu_u1"], u2=typed["bpcu_u2"], u3=typed["bpcu_u3"],
    ))
    if typed["target_power_w"] <= 0:
        raise ConfigError(f"{source}: target_power_w must be > 0, got {typed['target_power_w']}")
    points = typed["snr_points_db"]
    if points is None:
        points = snr_grid(typed["snr_start_db"], typed["snr_stop_db"], typed["snr_step_db"])
    sweep = domain(SweepConfig, dict(
        snr_points_db=points,
        trials_per_point=typed["trials_per_point"],
        seed=typed["seed"],
        target_power_w=typed["target_power_w"],
        schemes=typed["schemes"],
        min_errors=typed["min_errors"],
        batch_size=typed["batch_size"],
    ))
    return ExperimentConfig(
        geometry=geometry,
        front_end=front_end,
        gain_override=override,
        bpcu=bpcu,
        target_power_w=typed["target_power_w"],
        sweep=sweep,
    )


def load_config(path=None) -> ExperimentConfig:
    """Load and validate a config file; the bundled defaults when path is None."""
    actual = default_config_path() if path is None else Path(path)
    if not actual.is_file():
        raise ConfigError(f"config file not found: {actual}")
    return build_config(parse_kv_file(actual), source=str(actual))


def config_echo(cfg: ExperimentConfig) -> list[tuple[str, str]]:
    """Canonical (key, value) pairs describing cfg, for embedding in outputs."""
    sweep = cfg.sweep
    pairs: list[tuple[str, str]] = [
        ("room_height_m", repr(cfg.geometry.room_height_m)),
        ("cell_radius_m", repr(cfg.geometry.cell_radius_m)),
        ("rx_height_u1_m", repr(cfg.geometry.rx_heights_m[0])),
        ("rx_height_u2_m", repr(cfg.geometry.rx_heights_m[1])),
        ("rx_height_u3_m", repr(cfg.geometry.rx_heights_m[2])),
        ("r11_m", repr(cfg.geometry.r11_m)),
        ("r21_m", repr(cfg.geometry.r21_m)),
        ("r22_m", repr(cfg.geometry.r22_m)),
        ("r32_m", repr(cfg.geometry.r32_m)),
        ("semi_angle_deg", repr(cfg.front_end.semi_angle_deg)),
        ("fov_deg", repr(cfg.front_end.fov_deg)),
        ("filter_gain", repr(cfg.front_end.filter_gain)),
        ("responsivity_a_per_w", repr(cfg.front_end.responsivity_a_per_w)),
        ("detector_area_m2", repr(cfg.front_end.detector_area_m2)),
        ("concentrator_index", repr(cfg.front_end.concentrator_index)),
    ]
    if cfg.gain_override is not None:
        pairs += [(key, repr(getattr(cfg.gain_override, key.removeprefix("gain_"))))
                  for key in GAIN_KEYS]
    pairs += [
        ("bpcu_u1", str(cfg.bpcu.u1)),
        ("bpcu_u2", str(cfg.bpcu.u2)),
        ("bpcu_u3", str(cfg.bpcu.u3)),
        ("target_power_w", repr(cfg.target_power_w)),
        ("snr_points_db", ":".join(repr(s) for s in sweep.snr_points_db)),
        ("trials_per_point", str(sweep.trials_per_point)),
        ("seed", str(sweep.seed)),
        ("min_errors", str(sweep.min_errors)),
        ("batch_size", str(sweep.batch_size)),
        ("schemes", ",".join(sweep.schemes)),
    ]
    return pairs


def with_sweep(cfg: ExperimentConfig, **changes) -> ExperimentConfig:
    """Copy of cfg with selected sweep fields replaced."""
    return replace(cfg, sweep=replace(cfg.sweep, **changes))


def with_bpcu(cfg: ExperimentConfig, bpcu: SpectralEfficiencies) -> ExperimentConfig:
    return replace(cfg, bpcu=bpcu)
