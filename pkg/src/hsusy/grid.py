"""Uniform grids, sampled functions and the few stencils built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Mapping

import numpy as np
from scipy import integrate


@dataclass(frozen=True)
class Grid:
    xmin: float
    xmax: float
    n: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("a grid needs at least 3 points")
        if not self.xmax > self.xmin:
            raise ValueError("xmax must exceed xmin")

    @classmethod
    def from_spacing(cls, xmin: float, xmax: float, h: float) -> "Grid":
        return cls(xmin, xmax, int(round((xmax - xmin) / h)) + 1)

    @property
    def h(self) -> float:
        return (self.xmax - self.xmin) / (self.n - 1)

    @cached_property
    def x(self) -> np.ndarray:
        x = np.linspace(self.xmin, self.xmax, self.n)
        x.flags.writeable = False
        return x

    def index_of(self, x0: float) -> int:
        return int(np.argmin(np.abs(self.x - x0)))

    def interior(self, fraction: float = 0.9) -> np.ndarray:
        """Mask of the central ``fraction`` of the box."""
        half = 0.5 * fraction * (self.xmax - self.xmin)
        mid = 0.5 * (self.xmax + self.xmin)
        return np.abs(self.x - mid) <= half + 1e-12


@dataclass(frozen=True)
class GridFunction:
    grid: Grid
    values: np.ndarray
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("grid function has non-finite samples")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def __len__(self) -> int:
        return self.grid.n

    def with_values(self, values, **meta) -> "GridFunction":
        return GridFunction(self.grid, values, {**self.meta, **meta})

    def to_csv(self, path, **meta) -> None:
        write_csv(path, self.grid, self.values, {**self.meta, **meta})


def _format(v) -> str:
    if isinstance(v, (complex, np.complexfloating)):
        return repr(complex(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, grid: Grid, values, meta: Mapping[str, object] | None = None) -> None:
    """Write ``# key=value`` header lines then ``x,value`` or ``x,re,im`` rows."""
    head = {"xmin": grid.xmin, "xmax": grid.xmax, "n": grid.n}
    head.update(meta or {})
    values = np.asarray(values)
    lines = [f"# {k}={_format(v)}" for k, v in head.items()]
    if np.iscomplexobj(values):
        lines.append("x,re,im")
        lines += [f"{x!r},{z.real!r},{z.imag!r}"
                  for x, z in zip(grid.x.tolist(), values.tolist())]
    else:
        lines.append("x,value")
        lines += [f"{x!r},{v!r}" for x, v in zip(grid.x.tolist(), values.tolist())]
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path) -> tuple[dict[str, str], np.ndarray, np.ndarray]:
    meta, rows = {}, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            meta[key] = val
        elif line and not line[0].isalpha():
            rows.append([float(t) for t in line.split(",")])
    data = np.array(rows)
    if data.shape[1] == 3:
        return meta, data[:, 0], data[:, 1] + 1j * data[:, 2]
    return meta, data[:, 0], data[:, 1]


def derivative(values: np.ndarray, h: float) -> np.ndarray:
    """First derivative: 4th-order central inside, 2nd-order near the ends."""
    f = np.asarray(values)
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    d[1] = (f[2] - f[0]) / (2 * h)
    d[-2] = (f[-1] - f[-3]) / (2 * h)
    d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
    d[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
    return d


def second_difference(values: np.ndarray, h: float) -> np.ndarray:
    """Plain 3-point second difference; the two end samples are NaN."""
    f = np.asarray(values)
    d = np.full_like(f, np.nan)
    d[1:-1] = (f[:-2] - 2 * f[1:-1] + f[2:]) / h**2
    return d


def cumulative_integral(values: np.ndarray, grid: Grid, x0: float) -> np.ndarray:
    """Composite-Simpson running integral from ``x0`` to every grid point."""
    cum = integrate.cumulative_simpson(np.asarray(values), dx=grid.h, initial=0.0)
    offset = np.interp(x0, grid.x, cum.real)
    if np.iscomplexobj(cum):
        offset = offset + 1j * np.interp(x0, grid.x, cum.imag)
    return cum - offset


def trapezoid_norm(values: np.ndarray, h: float) -> float:
    return float(np.sqrt(integrate.trapezoid(np.abs(values) ** 2, dx=h)))


def inner(f: np.ndarray, g: np.ndarray, h: float) -> complex:
    """Trapezoid approximation of the L2 product <f|g>."""
    return complex(integrate.trapezoid(np.conj(f) * g, dx=h))
