"""INI run configuration: problem data, numerics and output options."""

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, SpecError
from .groundstate import DR_DEFAULT, SCHEDULE_DEFAULT, TOL_GS
from .problem import NonlinearityF, NonlinearityG, ProblemSpec, WeightP

G_FAMILIES = {
    "power_singular": (NonlinearityG.power_singular, ("gamma",)),
    "log_singular": (NonlinearityG.log_singular, ("floor",)),
    "table": (NonlinearityG.table, ("t", "values")),
}
F_FAMILIES = {
    "power": (NonlinearityF.power, ("q",)),
    "power_shift": (NonlinearityF.power_shift, ("q", "s")),
    "table": (NonlinearityF.table, ("t", "values")),
}
P_FAMILIES = {
    "inverse_power": (WeightP.inverse_power, ("sigma",)),
    "inverse_power_sq": (WeightP.inverse_power_sq, ("sigma",)),
    "gaussian": (WeightP.gaussian, ("scale",)),
    "exponential": (WeightP.exponential, ("scale",)),
    "constant": (WeightP.constant, ("value",)),
    "gaussian_sin": (WeightP.gaussian_sin, ()),
    "dipole": (WeightP.dipole, ("sigma",)),
}
LIST_PARAMS = {"t", "values"}
OPTIONAL_PARAMS = {"floor", "scale", "value"}


@dataclass(frozen=True)
class RunConfig:
    spec: ProblemSpec
    J: int = 400
    R: float = 1.0
    dr: float = DR_DEFAULT
    schedule: tuple = SCHEDULE_DEFAULT
    eta: float | None = None
    beta: float | None = None
    c: float | None = None
    tol_pde: float = 1e-8
    tol_cmp: float = 1e-6
    tol_gs: float = TOL_GS
    rho: float = 0.5
    verify_factor: int = 4
    seed: int = 0
    n_dirs: int = 4096
    out_dir: str = "out"
    formats: tuple = ("csv", "json", "svg")
    source: str = ""
    raw: dict = field(default_factory=dict, compare=False, repr=False)


def _line_of(text, section, key):
    """1-based line of ``key`` inside ``[section]`` (0 if absent)."""
    current = None
    for n, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            current = m.group(1).strip()
            continue
        if current == section and re.match(rf"{re.escape(key)}\s*[=:]", s, re.IGNORECASE):
            return n
    return 0


class _Reader:
    def __init__(self, cp, text, source):
        self.cp = cp
        self.text = text
        self.source = source

    def fail(self, section, key, msg):
        line = _line_of(self.text, section, key)
        where = f"{self.source}:{line}" if line else self.source
        raise ConfigError(f"{where}: [{section}] {key}: {msg}")

    def has(self, section, key):
        return self.cp.has_option(section, key) and self.cp.get(section, key).strip() != ""

    def get(self, section, key, conv=str, default=None, required=False):
        if not self.has(section, key):
            if required:
                self.fail(section, key, "missing required key")
            return default
        raw = self.cp.get(section, key).strip()
        try:
            return conv(raw)
        except (TypeError, ValueError) as exc:
            self.fail(section, key, f"cannot parse {raw!r} ({exc})")


def _floats(raw):
    return tuple(float(x) for x in re.split(r"[,\s]+", raw.strip()) if x)


def _family(rd, prefix, families):
    name = rd.get("problem", prefix, required=True)
    if name not in families:
        rd.fail("problem", prefix, f"unknown family {name!r}; choose from {sorted(families)}")
    ctor, params = families[name]
    args = []
    for p in params:
        key = f"{prefix}.{p}"
        if p in LIST_PARAMS:
            args.append(rd.get("problem", key, _floats, required=True))
        elif p in OPTIONAL_PARAMS and not rd.has("problem", key):
            break
        else:
            args.append(rd.get("problem", key, float, required=True))
    try:
        return ctor(*args)
    except SpecError as exc:
        rd.fail("problem", prefix, str(exc))


def parse_config(text, source="<config>"):
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    if not cp.has_section("problem"):
        raise ConfigError(f"{source}: missing [problem] section")
    rd = _Reader(cp, text, source)

    N = rd.get("problem", "N", int, required=True)
    a = rd.get("problem", "a", float, required=True)
    g = _family(rd, "g", G_FAMILIES)
    f = _family(rd, "f", F_FAMILIES)
    p = _family(rd, "p", P_FAMILIES)
    try:
        spec = ProblemSpec(N, a, g, f, p)
    except SpecError as exc:
        rd.fail("problem", "a" if "a must" in str(exc) else "N", str(exc))

    num = "numerics"
    kw = {}
    for key, conv in (("J", int), ("R", float), ("dr", float), ("eta", float),
                      ("beta", float), ("c", float), ("tol_pde", float), ("tol_cmp", float),
                      ("tol_gs", float), ("rho", float), ("verify_factor", int),
                      ("seed", int), ("n_dirs", int)):
        v = rd.get(num, key, conv)
        if v is not None:
            kw[key] = v
    sched = rd.get(num, "schedule", _floats)
    if sched is not None:
        kw["schedule"] = sched
    out_dir = rd.get("output", "dir")
    if out_dir is not None:
        kw["out_dir"] = out_dir
    formats = rd.get("output", "formats", lambda s: tuple(x.strip().lower()
                                                          for x in s.split(",") if x.strip()))
    if formats is not None:
        kw["formats"] = formats
    cfg = RunConfig(spec, source=source, raw={s: dict(cp[s]) for s in cp.sections()}, **kw)
    _validate(rd, cfg)
    return cfg


def _validate(rd, cfg):
    for key in ("tol_pde", "tol_cmp", "tol_gs", "dr", "R", "rho"):
        if not getattr(cfg, key) > 0:
            rd.fail("numerics", key, "must be positive")
    for key in ("eta", "beta", "c"):
        v = getattr(cfg, key)
        if v is not None and not v > 0:
            rd.fail("numerics", key, "must be positive")
    if cfg.J < 100:
        rd.fail("numerics", "J", "must be at least 100")
    s = cfg.schedule
    if any(b <= x for x, b in zip(s, s[1:])) or not s or s[0] <= 0:
        rd.fail("numerics", "schedule", "must be strictly increasing and positive")
    bad = set(cfg.formats) - {"csv", "json", "svg"}
    if bad:
        rd.fail("output", "formats", f"unknown formats {sorted(bad)}")


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from exc
    return parse_config(text, str(path))
