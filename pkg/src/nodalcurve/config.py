"""Read-only numerical configuration, serializable to ``key = value`` text."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields

from .errors import ConfigError


@dataclass(frozen=True)
class Config:
    # special functions
    oracle_tau_max: float = 50.0
    beta_max: float = 1.0
    alpha_max: float = 1.0
    k_quad_rtol: float = 1e-13
    ode_rtol: float = 1e-12
    ode_refine: float = 100.0
    quad_rtol: float = 1e-12
    # band wave integration range in r
    band_r_max: float = 10.0
    # zero counting
    sign_refine_max: int = 8
    contour_retries: int = 5
    zero_rel_tol: float = 1e-6
    # cli
    tolerance: float = 0.05

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)

    def to_text(self) -> str:
        return "".join(f"{f.name} = {getattr(self, f.name)!r}\n" for f in fields(self))

    @classmethod
    def from_text(cls, text: str) -> "Config":
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in types:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            try:
                values[key] = int(value) if types[key] in ("int", int) else float(value)
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
        return cls(**values)

    @classmethod
    def load(cls, path) -> "Config":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


DEFAULT = Config()


def resolve(config: Config | None) -> Config:
    return DEFAULT if config is None else config
