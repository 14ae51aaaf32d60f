"""Strict JSON run configuration for the command-line tools.

Complex numbers are written as two decimal strings ``["re", "im"]`` and real
parameters may be JSON numbers or decimal strings.  Unknown keys anywhere are
errors; every default is filled in so that :meth:`RunConfig.to_dict` is the
complete effective configuration.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Any

from .errors import ConfigError

FAMILIES = {
    "identity": (),
    "half_plane_power": ("sigma",),
    "disk_power": ("sigma",),
    "disk_power_normalized": ("sigma",),
    "welded_stretch": ("lam", "eta"),
    "radial_stretch": ("lam",),
}

DEFAULT_TOLERANCES = {
    "quadrature": 1e-8,
    "slope_slack": 0.15,
    "twist_window": 0.02,
    "symmetry": 1e-10,
    "weld": 1e-10,
    "beltrami": 1e-3,
    "margin": 1e-9,
    "log_slope": 0.05,
    "holomorphy": 1e-6,
    "coverage": 0.02,
}


def parse_real(value, where: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a real number, got a boolean")
    if isinstance(value, (int, float)):
        x = float(value)
    elif isinstance(value, str):
        try:
            x = float(Decimal(value))
        except InvalidOperation:
            raise ConfigError(f"{where}: {value!r} is not a decimal number") from None
    else:
        raise ConfigError(f"{where}: expected a real number, got {type(value).__name__}")
    if not math.isfinite(x):
        raise ConfigError(f"{where}: value must be finite")
    return x


def parse_complex(value, where: str) -> complex:
    """``["re", "im"]`` decimal strings; a bare real is accepted as ``im = 0``."""
    if isinstance(value, list):
        if len(value) != 2 or not all(isinstance(v, str) for v in value):
            raise ConfigError(f"{where}: complex values are [\"re\", \"im\"] decimal strings")
        return complex(parse_real(value[0], where), parse_real(value[1], where))
    return complex(parse_real(value, where), 0.0)


def parse_int(value, where: str, lo: int | None = None, hi: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer")
    if (lo is not None and value < lo) or (hi is not None and value > hi):
        raise ConfigError(f"{where}: {value} outside [{lo}, {hi}]")
    return value


def format_real(x: float) -> str:
    return format(x, ".17g")


def format_complex(z: complex) -> list[str]:
    return [format_real(z.real), format_real(z.imag)]


def _take(obj: dict, allowed: set, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(extra)}")
    return obj


@dataclass(frozen=True)
class MapConfig:
    family: str = "disk_power"
    params: dict = field(default_factory=lambda: {"sigma": 0.5 + 0j})
    bounded: bool = True

    @classmethod
    def parse(cls, obj) -> "MapConfig":
        obj = _take(obj, {"family", "params", "bounded"}, "map")
        family = obj.get("family", "disk_power")
        if family not in FAMILIES:
            raise ConfigError(f"map.family: unknown family {family!r}")
        names = FAMILIES[family]
        raw = _take(obj.get("params", {}), set(names), "map.params")
        defaults = {"sigma": 0.5 + 0j, "lam": 0j, "eta": 0j}
        params = {n: parse_complex(raw[n], f"map.params.{n}") if n in raw else defaults[n] for n in names}
        bounded = obj.get("bounded", True)
        if not isinstance(bounded, bool):
            raise ConfigError("map.bounded: expected true or false")
        return cls(family, params, bounded)

    def to_dict(self) -> dict:
        return {"family": self.family, "bounded": self.bounded,
                "params": {k: format_complex(v) for k, v in self.params.items()}}

    def build(self):
        """Instantiate the configured map (constructor errors propagate)."""
        from . import maps, weld

        p = self.params
        if self.family == "identity":
            return maps.Identity()
        if self.family == "half_plane_power":
            return maps.HalfPlanePowerMap(p["sigma"])
        if self.family == "disk_power":
            return maps.DiskPowerMap(p["sigma"], bounded=self.bounded)
        if self.family == "disk_power_normalized":
            return maps.NormalizedDiskMap(maps.DiskPowerMap(p["sigma"], bounded=self.bounded))
        if self.family == "welded_stretch":
            return weld.WeldedStretch(p["lam"], p["eta"])
        return weld.radial_stretch(p["lam"])


@dataclass(frozen=True)
class ScheduleConfig:
    j_min: int = 2
    j_max: int = 14
    tail_length: int = 4

    @classmethod
    def parse(cls, obj) -> "ScheduleConfig":
        obj = _take(obj, {"j_min", "j_max", "tail_length"}, "schedule")
        j_min = parse_int(obj.get("j_min", 2), "schedule.j_min", 2, 19)
        j_max = parse_int(obj.get("j_max", 14), "schedule.j_max", j_min + 1, 20)
        tail = parse_int(obj.get("tail_length", 4), "schedule.tail_length", 1, j_max - j_min)
        return cls(j_min, j_max, tail)


@dataclass(frozen=True)
class GridConfig:
    """Either an explicit list of ``t`` or ``modulus * exp(i * angle)``."""

    t: tuple = (1 + 0j,)
    modulus: float | None = None
    angles: tuple | None = None
    angle_unit: str = "rad"

    @classmethod
    def parse(cls, obj) -> "GridConfig":
        obj = _take(obj, {"t", "modulus", "angles", "angle_unit"}, "grid")
        polar = "modulus" in obj or "angles" in obj
        if polar and "t" in obj:
            raise ConfigError("grid: give either t or modulus/angles, not both")
        if polar:
            if "modulus" not in obj or "angles" not in obj:
                raise ConfigError("grid: modulus and angles go together")
            unit = obj.get("angle_unit", "rad")
            if unit not in ("rad", "pi"):
                raise ConfigError("grid.angle_unit: expected \"rad\" or \"pi\"")
            if not isinstance(obj["angles"], list) or not obj["angles"]:
                raise ConfigError("grid.angles: expected a nonempty list")
            modulus = parse_real(obj["modulus"], "grid.modulus")
            angles = tuple(parse_real(a, f"grid.angles[{i}]") for i, a in enumerate(obj["angles"]))
            scale = math.pi if unit == "pi" else 1.0
            ts = tuple(modulus * complex(math.cos(a * scale), math.sin(a * scale)) for a in angles)
            return cls(ts, modulus, angles, unit)
        if "angle_unit" in obj:
            raise ConfigError("grid.angle_unit only applies to modulus/angles grids")
        raw = obj.get("t", [["1", "0"]])
        if not isinstance(raw, list) or not raw:
            raise ConfigError("grid.t: expected a nonempty list")
        return cls(tuple(parse_complex(v, f"grid.t[{i}]") for i, v in enumerate(raw)))

    def to_dict(self) -> dict:
        if self.modulus is not None:
            return {"modulus": format_real(self.modulus), "angle_unit": self.angle_unit,
                    "angles": [format_real(a) for a in self.angles]}
        return {"t": [format_complex(t) for t in self.t]}


@dataclass(frozen=True)
class RegionConfig:
    k: float = 0.5
    n: int = 256

    @classmethod
    def parse(cls, obj) -> "RegionConfig":
        obj = _take(obj, {"k", "n"}, "region")
        return cls(parse_real(obj.get("k", 0.5), "region.k"),
                   parse_int(obj.get("n", 256), "region.n", 64, 10 ** 7))


@dataclass(frozen=True)
class TwistConfig:
    zeta: complex = 1 + 0j
    j_max: int = 1000
    k: float | None = None

    @classmethod
    def parse(cls, obj) -> "TwistConfig":
        obj = _take(obj, {"zeta", "j_max", "k"}, "twist")
        k = parse_real(obj["k"], "twist.k") if obj.get("k") is not None else None
        return cls(parse_complex(obj.get("zeta", ["1", "0"]), "twist.zeta"),
                   parse_int(obj.get("j_max", 1000), "twist.j_max", 4, 1020), k)


@dataclass(frozen=True)
class VerifyConfig:
    samples: int = 2000

    @classmethod
    def parse(cls, obj) -> "VerifyConfig":
        obj = _take(obj, {"samples"}, "verify")
        return cls(parse_int(obj.get("samples", 2000), "verify.samples", 10, 10 ** 7))


@dataclass(frozen=True)
class RunConfig:
    map: MapConfig = field(default_factory=MapConfig)
    schedule: ScheduleConfig = field(default_factory=ScheduleConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 0
    region: RegionConfig = field(default_factory=RegionConfig)
    twist: TwistConfig = field(default_factory=TwistConfig)
    spectra_k: float = 0.5
    verify: VerifyConfig = field(default_factory=VerifyConfig)

    @classmethod
    def from_dict(cls, obj: Any) -> "RunConfig":
        obj = _take(obj, {"map", "schedule", "grid", "tolerances", "seed", "region",
                          "twist", "spectra", "verify"}, "config")
        tol_raw = _take(obj.get("tolerances", {}), set(DEFAULT_TOLERANCES), "tolerances")
        tols = dict(DEFAULT_TOLERANCES)
        for name, v in tol_raw.items():
            tols[name] = parse_real(v, f"tolerances.{name}")
            if tols[name] <= 0:
                raise ConfigError(f"tolerances.{name}: must be positive")
        spectra = _take(obj.get("spectra", {}), {"k"}, "spectra")
        return cls(
            map=MapConfig.parse(obj.get("map", {})),
            schedule=ScheduleConfig.parse(obj.get("schedule", {})),
            grid=GridConfig.parse(obj.get("grid", {})),
            tolerances=tols,
            seed=parse_int(obj.get("seed", 0), "seed", 0, 2 ** 64 - 1),
            region=RegionConfig.parse(obj.get("region", {})),
            twist=TwistConfig.parse(obj.get("twist", {})),
            spectra_k=parse_real(spectra.get("k", 0.5), "spectra.k"),
            verify=VerifyConfig.parse(obj.get("verify", {})),
        )

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        def no_dupes(pairs):
            keys = [k for k, _ in pairs]
            dup = {k for k in keys if keys.count(k) > 1}
            if dup:
                raise ConfigError(f"duplicate key(s) {', '.join(sorted(dup))}")
            return dict(pairs)

        try:
            obj = json.loads(text, object_pairs_hook=no_dupes,
                             parse_constant=lambda c: (_ for _ in ()).throw(ConfigError(f"{c} not allowed")))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None
        return cls.from_dict(obj)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.loads(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None

    def with_seed(self, seed: int | None) -> "RunConfig":
        if seed is None:
            return self
        from dataclasses import replace

        return replace(self, seed=parse_int(seed, "--seed", 0, 2 ** 64 - 1))

    def to_dict(self) -> dict:
        return {
            "map": self.map.to_dict(),
            "schedule": asdict(self.schedule),
            "grid": self.grid.to_dict(),
            "tolerances": {k: format_real(v) for k, v in sorted(self.tolerances.items())},
            "seed": self.seed,
            "region": {"k": format_real(self.region.k), "n": self.region.n},
            "twist": {"zeta": format_complex(self.twist.zeta), "j_max": self.twist.j_max,
                      "k": None if self.twist.k is None else format_real(self.twist.k)},
            "spectra": {"k": format_real(self.spectra_k)},
            "verify": {"samples": self.verify.samples},
        }

    def canonical(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def sha256(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()
