"""Run configuration shared by the library drivers and the CLI."""

import dataclasses
import json
from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class RunConfig:
    grid_size: int = 1024        # M
    levels: int = 16             # J: coefficient window [-J, J]
    section_start: int = 32      # N doubling start
    section_cap: int = 512
    section_tol: float = 1e-9
    cmv_window: int = 128        # W: basis window [-W, W]
    depth: int = 32
    tol_alg: float = 1e-8
    tol_fun: float = 1e-6
    tol_roundtrip: float = 1e-3
    margin_min: float = 1e-3
    tail_tol: float = 1e-6
    boundary: str = "zero-tail"
    oversample: int = 4
    check_splits: bool = True
    out: str | None = None
    fmt: str = "json"

    def __post_init__(self):
        for name in ("grid_size", "levels", "section_start", "section_cap",
                     "cmv_window", "depth", "oversample"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be positive")
        for name in ("section_tol", "tol_alg", "tol_fun", "tol_roundtrip",
                     "margin_min", "tail_tol"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be positive")
        if self.boundary not in ("zero-tail", "decoupled"):
            raise InputError(f"unknown boundary policy {self.boundary!r}")
        if self.fmt not in ("json", "csv"):
            raise InputError(f"format must be json or csv, got {self.fmt!r}")

    def replace(self, **kw):
        return dataclasses.replace(self, **kw)

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            data = json.load(fh)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self):
        return dataclasses.asdict(self)
