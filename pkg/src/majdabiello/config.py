"""Run configuration: an INI file with one section per module.

Every key is declared once in ``KEYS``; parsing, defaults and the generated
reference page all read from that table.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .extension import HalfLineFunction
from .solver import ProblemSpec, SolverParams


@dataclass(frozen=True)
class Key:
    section: str
    name: str
    kind: type
    default: object
    doc: str


_SOLVER_DEFAULTS = SolverParams()

KEYS = (
    Key("run", "seed", int, 0, "base seed for every random ensemble"),
    Key("run", "threads", int, 1, "worker threads for ensemble probes (1 gives byte-identical output)"),
    Key("problem", "alpha", float, 0.5, "dispersion ratio alpha, 0 < alpha < 1"),
    Key("problem", "s", float, 1.0, "Sobolev index, 0 < s < 2 with s != 1/2, 3/2"),
    Key("problem", "u0", str, "gaussian(0.1,1,1)", "initial datum u0 on x >= 0 (data profile)"),
    Key("problem", "v0", str, "gaussian(0.1,1,1)", "initial datum v0 on x >= 0 (data profile)"),
    Key("problem", "f", str, "gaussian(0.1,1,1)", "boundary datum f(t) = u(0, t) (data profile)"),
    Key("problem", "g", str, "gaussian(0.1,1,1)", "boundary datum g(t) = v(0, t) (data profile)"),
    Key("problem", "x_max", float, 20.0, "right end of the sampling interval for profile data"),
    Key("problem", "samples", int, 2049, "number of samples for profile data"),
    Key("problem", "compat_tol", float, 1e-10, "tolerance of the corner compatibility check"),
    Key("solver", "T", float, _SOLVER_DEFAULTS.T, "requested local time, halved on non-convergence"),
    Key("solver", "n_x", int, _SOLVER_DEFAULTS.n_x, "spatial nodes (power of two)"),
    Key("solver", "n_t", int, _SOLVER_DEFAULTS.n_t, "time nodes on the stored window (even)"),
    Key("solver", "L", float, _SOLVER_DEFAULTS.L, "spatial box [-L, L)"),
    Key("solver", "window_factor", float, _SOLVER_DEFAULTS.window_factor, "stored time window is [-wT, wT)"),
    Key("solver", "n_beta", int, _SOLVER_DEFAULTS.n_beta, "boundary quadrature nodes (multiple of 8)"),
    Key("solver", "picard_tol", float, _SOLVER_DEFAULTS.picard_tol, "relative Picard stopping tolerance"),
    Key("solver", "max_iters", int, _SOLVER_DEFAULTS.max_iters, "Picard iterations per attempt"),
    Key("solver", "max_halvings", int, _SOLVER_DEFAULTS.max_halvings, "halvings of T before giving up"),
    Key("solver", "extension", str, _SOLVER_DEFAULTS.extension, "auto, zero, reflect1, reflect2 or reflect3"),
    Key("solver", "tail_tol", float, _SOLVER_DEFAULTS.tail_tol, "largest accepted relative quadrature tail"),
    Key("solver", "taper_boundary", bool, _SOLVER_DEFAULTS.taper_boundary, "taper boundary data by eta(t / 2T)"),
    Key("solver", "dealias", bool, _SOLVER_DEFAULTS.dealias, "2/3-rule dealiasing of the products"),
    Key("solver", "free_box_factor", int, _SOLVER_DEFAULTS.free_box_factor, "box enlargement for the free flow"),
    Key("probe", "which", str, "bil_1,bil_2,bil_3,bil_4", "comma-separated bilinear estimates"),
    Key("probe", "s", float, 1.0, "Sobolev index of the probe norms"),
    Key("probe", "b", float, 0.46, "modulation exponent b"),
    Key("probe", "gamma", float, 0.51, "low-frequency exponent gamma"),
    Key("probe", "alpha", float, 0.5, "dispersion ratio of the X_alpha norms"),
    Key("probe", "ensemble", int, 200, "fields per ensemble"),
    Key("probe", "n_packets", int, 6, "wavepackets per random field"),
    Key("probe", "decay_min", float, 1.0, "smallest sampled spectral decay exponent"),
    Key("probe", "decay_max", float, 3.0, "largest sampled spectral decay exponent"),
    Key("probe", "xi_max", float, 2.0, "largest packet frequency"),
    Key("probe", "n_x", int, 128, "probe grid spatial nodes"),
    Key("probe", "L", float, 24.0, "probe grid box half-width"),
    Key("probe", "n_t", int, 512, "probe grid time nodes"),
    Key("probe", "horizon", float, 8.0, "probe grid time half-window"),
    Key("probe", "double_grid", bool, False, "also run on the doubled box and report the stability ratio"),
    Key("verify", "which", str, "kato,strichartz4", "comma-separated linear estimates"),
    Key("verify", "ensemble", int, 100, "fields per linear-estimate ensemble"),
    Key("verify", "theta", float, 0.0, "derivative exponent of the L^4 estimate"),
    Key("verify", "b", float, 0.4, "modulation exponent of the L^4 estimate"),
    Key("verify", "p", float, 4.0, "Lebesgue exponent of the L^p_x L^2_t estimate"),
    Key("verify", "s", float, 1.0, "Sobolev index of the temporal-trace estimate"),
    Key("verify", "n_beta_levels", str, "1024,2048,4096", "quadrature sizes of the trace-recovery ladder"),
    Key("verify", "steps", str, "0.01,0.005,0.0025", "stencil steps of the residual ladder"),
    Key("resonance", "alphas", str, "0.25,0.5,0.899", "comma-separated alpha values"),
    Key("resonance", "c", float, 1.5, "region window parameter, 1 < c < sqrt(|r2/r1|)"),
    Key("resonance", "samples", int, 10000, "random frequency tuples per identity sweep"),
    Key("resonance", "xi1", float, 1.0, "xi1 used for the region table"),
    Key("convergence", "levels", int, 2, "refinement levels (each doubles n_x, n_t and n_beta)"),
)

SECTIONS = tuple(dict.fromkeys(k.section for k in KEYS))
_INDEX = {(k.section, k.name): k for k in KEYS}


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _coerce(key: Key, text: str):
    try:
        if key.kind is bool:
            return _parse_bool(text)
        return key.kind(text.strip())
    except ValueError:
        raise ValidationError(f"[{key.section}] {key.name}: cannot read {text!r} as {key.kind.__name__}") from None


@dataclass
class RunConfig:
    values: dict = field(default_factory=dict)
    source: str | None = None

    def get(self, section: str, name: str):
        return self.values[section][name]

    def section(self, name: str) -> dict:
        return dict(self.values[name])

    def with_overrides(self, **overrides) -> "RunConfig":
        """Overrides given as section__name=value."""
        values = {s: dict(v) for s, v in self.values.items()}
        for dotted, value in overrides.items():
            section, name = dotted.split("__", 1)
            if (section, name) not in _INDEX:
                raise ValidationError(f"unknown configuration key [{section}] {name}")
            values[section][name] = value
        return RunConfig(values, self.source)

    def as_dict(self) -> dict:
        return {s: dict(v) for s, v in self.values.items()}


def default_config() -> RunConfig:
    values = {s: {} for s in SECTIONS}
    for key in KEYS:
        values[key.section][key.name] = key.default
    return RunConfig(values)


def parse_config(text: str, source: str | None = None) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text, source=source or "<config>")
    except configparser.Error as exc:
        raise ValidationError(f"malformed configuration: {exc}") from None
    config = default_config()
    config.source = source
    for section in parser.sections():
        if section not in SECTIONS:
            raise ValidationError(f"unknown configuration section [{section}]; expected one of {SECTIONS}")
        for name, text_value in parser.items(section):
            key = _INDEX.get((section, name))
            if key is None:
                raise ValidationError(f"unknown configuration key [{section}] {name}")
            config.values[section][name] = _coerce(key, text_value)
    return config


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"configuration file {path} not found")
    return parse_config(path.read_text(), str(path))


def render_config(config: RunConfig) -> str:
    """INI text that parses back to ``config``."""
    lines = []
    for section in SECTIONS:
        lines.append(f"[{section}]")
        for name, value in config.values[section].items():
            text = repr(value) if isinstance(value, float) else str(value).lower() if isinstance(value, bool) else str(value)
            lines.append(f"{name} = {text}")
        lines.append("")
    return "\n".join(lines)


def config_reference() -> str:
    """Markdown reference of every configuration key."""
    out = [
        "# Configuration reference",
        "",
        "INI format, one section per module. Unknown sections or keys are rejected.",
        "",
        "Data profiles (`[problem]` u0, v0, f, g): `zero`, `gaussian(A,c,w)` for",
        "A exp(-((x - c)/w)^2), or `csv:PATH` for a two-column file with a header row.",
        "",
    ]
    for section in SECTIONS:
        out += [f"## [{section}]", "", "| key | type | default | meaning |", "|---|---|---|---|"]
        for key in (k for k in KEYS if k.section == section):
            out.append(f"| `{key.name}` | {key.kind.__name__} | `{key.default}` | {key.doc} |")
        out.append("")
    return "\n".join(out)


_GAUSSIAN = re.compile(r"^gaussian\(\s*([^,]+),\s*([^,]+),\s*([^,)]+)\)$")


def data_profile(text: str, x_max: float, samples: int, s: float = 0.0, base: Path | None = None) -> HalfLineFunction:
    """Build half-line data from a profile string."""
    text = text.strip()
    if text == "zero":
        return HalfLineFunction.from_callable(lambda x: np.zeros_like(x), x_max, samples, s=s)
    match = _GAUSSIAN.match(text)
    if match:
        try:
            A, c, w = (float(g) for g in match.groups())
        except ValueError:
            raise ValidationError(f"gaussian profile needs three numbers, got {text!r}") from None
        if w <= 0:
            raise ValidationError(f"gaussian width must be positive in {text!r}")
        return HalfLineFunction.from_callable(lambda x: A * np.exp(-(((x - c) / w) ** 2)), x_max, samples, s=s)
    if text.startswith("csv:"):
        path = Path(text[4:])
        if base is not None and not path.is_absolute():
            path = base / path
        if not path.is_file():
            raise ValidationError(f"data file {path} not found")
        return HalfLineFunction.from_csv(path, s=s)
    raise ValidationError(f"unknown data profile {text!r}; use zero, gaussian(A,c,w) or csv:PATH")


def problem_from_config(config: RunConfig) -> ProblemSpec:
    p = config.section("problem")
    base = Path(config.source).parent if config.source else None
    data = {name: data_profile(p[name], p["x_max"], p["samples"], p["s"], base) for name in ("u0", "v0", "f", "g")}
    return ProblemSpec(p["alpha"], p["s"], compat_tol=p["compat_tol"], **data).validate()


def solver_from_config(config: RunConfig) -> SolverParams:
    return SolverParams(**config.section("solver")).validate()


def split_list(text: str, kind=str) -> list:
    items = [t.strip() for t in str(text).split(",") if t.strip()]
    try:
        return [kind(t) for t in items]
    except ValueError:
        raise ValidationError(f"cannot read list {text!r}") from None
