"""Run configuration: presets, strict key-value config files, canonical echo.

Config files are INI-style with typed sections; unknown sections or keys are
errors.  Presets cover the shipped cross-section geometries; a config file
overlays a preset, and command-line flags overlay both.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

from .curvature import CollarMetric, GridSpec, build_collar_metric
from .dynamics import VerifierConfig
from .report import DEFAULT_SEED
from .slices import ConformalTorus2D, ConstantWarp, PhiSpec, ScaledConstCurv, \
    build_extension_schedule

__all__ = ["ConfigError", "RunConfig", "PRESETS", "load_config", "resolve_config"]


class ConfigError(ValueError):
    """Malformed or unknown configuration input."""


# section -> key -> type
_SCHEMA = {
    "run": {"preset": str, "kappa": float, "C0": float, "eps_overlap": float,
            "t0": float, "seed": int, "out": str},
    "slice": {"variant": str, "k": float, "dim": int, "warp": str, "warp_value": float,
              "a0": float, "a0p": float, "target_C": float,
              "phi_c0": float, "phi_c1": float, "phi_c2": float,
              "phi_om_t": float, "phi_ph_t": float, "phi_om1": float,
              "phi_ph1": float, "phi_om2": float, "phi_ph2": float},
    "grid": {"t_min": float, "t_max": float, "n_t": int, "n_x": int, "n_dirs": int},
    "dynamics": {"q_m": float, "epsilon": float, "min_transit": float,
                 "entry_cos_floor": float, "n_samples": int, "n_growth_samples": int,
                 "trace_length": float, "trace_tdot": float, "trace_mu0": float},
    "scan": {"kappa_lo": float, "kappa_hi": float, "n_grid": int},
}


@dataclass(frozen=True)
class RunConfig:
    kappa: float = 20.0
    C0: float | None = None
    eps_overlap: float = 0.25
    t0: float | None = None
    seed: int = DEFAULT_SEED
    out: str = "out"
    slice_variant: str = "scaled_const_curv"
    k: float = -1.0
    dim: int = 2
    warp: str = "constant"
    warp_value: float = 1.0
    a0: float = 1.0
    a0p: float = 1.0
    target_C: float = 4.0
    phi: dict = field(default_factory=dict)
    grid: GridSpec = field(default_factory=GridSpec)
    q_m: float = 2.0
    epsilon: float = 0.1
    min_transit: float = 1.0
    entry_cos_floor: float = 0.6
    n_samples: int = 100
    n_growth_samples: int = 6
    trace_length: float = 3.0
    trace_tdot: float = 0.8
    trace_mu0: float = 0.0
    kappa_lo: float = 0.05
    kappa_hi: float = 64.0
    n_grid: int = 41

    def __post_init__(self) -> None:
        if not (self.kappa > 0.0):
            raise ConfigError(f"kappa must be positive, got {self.kappa}")
        if self.grid.n_t < 8:
            raise ConfigError("grid resolution n_t must be at least 8")

    def slice_family(self):
        if self.slice_variant == "scaled_const_curv":
            if self.warp == "constant":
                warp = ConstantWarp(self.warp_value)
            elif self.warp == "schedule":
                warp = build_extension_schedule(self.a0, self.a0p, self.target_C)
            else:
                raise ConfigError(f"unknown warp kind {self.warp!r}")
            return ScaledConstCurv(self.k, self.dim, warp)
        if self.slice_variant == "conformal_torus_2d":
            return ConformalTorus2D(PhiSpec(**self.phi))
        raise ConfigError(f"unknown slice variant {self.slice_variant!r}")

    def build_metric(self) -> CollarMetric:
        return build_collar_metric(self.slice_family(), self.kappa, C0=self.C0,
                                   t0=self.t0, eps_overlap=self.eps_overlap)

    def verifier(self) -> VerifierConfig:
        return VerifierConfig(self.q_m, self.epsilon, self.min_transit,
                              self.entry_cos_floor)

    def echo(self) -> dict:
        """Canonical flat {key: str} echo for report hashing."""
        out: dict = {}
        for key in ("kappa", "C0", "eps_overlap", "t0", "slice_variant", "k", "dim",
                    "warp", "warp_value", "a0", "a0p", "target_C", "q_m", "epsilon",
                    "min_transit", "entry_cos_floor", "n_samples", "n_growth_samples"):
            out[key] = repr(getattr(self, key))
        out["phi"] = repr(sorted(self.phi.items()))
        g = self.grid
        out["grid"] = f"{g.t_min}:{g.t_max}:{g.n_t}:{g.n_x}:{g.n_dirs}"
        out["seed"] = str(self.seed)
        return out


PRESETS: dict[str, dict] = {
    # static hyperbolic cross-section: exactly constant curvature -kappa^2
    # beyond the bridge
    "hyperbolic-slice": {"slice_variant": "scaled_const_curv", "k": -1.0, "dim": 2,
                         "warp": "constant", "warp_value": 1.0},
    # flat torus cross-section with a genuine extension schedule (strictly
    # convex boundary joint)
    "flat-torus": {"slice_variant": "scaled_const_curv", "k": 0.0, "dim": 2,
                   "warp": "schedule", "a0": 1.0, "a0p": 1.0, "target_C": 4.0},
    # round sphere cross-section
    "sphere-slice": {"slice_variant": "scaled_const_curv", "k": 1.0, "dim": 2,
                     "warp": "constant", "warp_value": 1.0},
    # conformal torus with nonzero Codazzi term; oracle work only
    "oracle-torus": {"slice_variant": "conformal_torus_2d", "kappa": 2.0,
                     "phi": {"c1": 0.1, "om1": 1.0, "c2": 0.05, "om_t": 1.3,
                             "om2": 2.0}},
}


def _apply(cfg: RunConfig, updates: dict) -> RunConfig:
    phi = updates.pop("phi", None)
    if phi is not None:
        updates["phi"] = dict(phi)
    grid_keys = {k: updates.pop(k) for k in ("t_min", "t_max", "n_t", "n_x", "n_dirs")
                 if k in updates}
    if grid_keys:
        updates["grid"] = replace(cfg.grid, **grid_keys)
    return replace(cfg, **updates)


def load_config(path: str | Path) -> dict:
    """Parse a config file into a flat update dict; unknown keys are errors."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc

    updates: dict = {}
    phi: dict = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            typ = _SCHEMA[section][key]
            try:
                val = typ(raw)
            except ValueError as exc:
                raise ConfigError(f"bad value for {section}.{key}: {raw!r}") from exc
            if key.startswith("phi_"):
                phi[key[len("phi_"):]] = val
            else:
                updates[key] = val
    if phi:
        updates["phi"] = phi
    return updates


def resolve_config(
    preset: str | None = None,
    config_path: str | Path | None = None,
    seed: int | None = None,
    out: str | None = None,
) -> RunConfig:
    """defaults <- preset <- config file <- CLI flags."""
    cfg = RunConfig()
    file_updates = {} if config_path is None else load_config(config_path)
    preset_name = preset or file_updates.pop("preset", None)
    if preset_name is not None:
        if preset_name not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset_name!r}; available: {sorted(PRESETS)}")
        cfg = _apply(cfg, dict(PRESETS[preset_name]))
    if file_updates:
        file_updates.pop("preset", None)
        cfg = _apply(cfg, file_updates)
    if seed is not None:
        cfg = replace(cfg, seed=int(seed))
    if out is not None:
        cfg = replace(cfg, out=str(out))
    return cfg
