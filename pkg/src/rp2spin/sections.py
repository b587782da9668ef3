"""Functions on antipodally paired sample sets of S^2.

Rows ``2k`` and ``2k+1`` of a sample set are always a point and its
antipode; this is also the on-disk convention of the CSV/JSON formats.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import PairingError, ParityError
from .geometry import random_sphere_points

PAIR_TOL = 1e-12
PARITY_RTOL = 1e-10


def paired_points(rng: np.random.Generator, n_pairs: int) -> np.ndarray:
    """``2 * n_pairs`` points: uniform draws interleaved with their antipodes."""
    x = random_sphere_points(rng, n_pairs)
    out = np.empty((2 * n_pairs, 3))
    out[0::2] = x
    out[1::2] = -x
    return out


def pair_permutation(n_points: int) -> np.ndarray:
    """Index map sending each sample to its antipode (0<->1, 2<->3, ...)."""
    return np.arange(n_points) ^ 1


@dataclass(frozen=True)
class SampledSection:
    """Values of a C^d-valued function on a paired sample set."""

    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        vals = np.array(self.values, dtype=complex)
        if vals.ndim == 1:
            vals = vals[:, None]
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise PairingError("points must be an (n, 3) array")
        if len(pts) % 2 or len(pts) == 0:
            raise PairingError("sample set must hold an even, nonzero count")
        if np.max(np.abs(pts[0::2] + pts[1::2])) > PAIR_TOL:
            raise PairingError("rows 2k and 2k+1 are not antipodal")
        if vals.shape[0] != len(pts):
            raise ValueError("one value vector per sample point is required")
        pts.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, points: np.ndarray,
                      f: Callable[[np.ndarray], np.ndarray]) -> "SampledSection":
        """Sample ``f`` (vectorized over an ``(n, 3)`` array) on ``points``."""
        return cls(points, np.asarray(f(np.asarray(points, dtype=float))))

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def __len__(self) -> int:
        return len(self.points)

    def with_values(self, values) -> "SampledSection":
        return SampledSection(self.points, values)

    def antipodal_values(self) -> np.ndarray:
        """``values`` re-indexed so row k holds f(-x_k)."""
        return self.values[pair_permutation(len(self))]

    def max_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.values, axis=1)))

    def parity_residuals(self) -> tuple[float, float]:
        """(max |f(x) - f(-x)|, max |f(x) + f(-x)|) over the samples."""
        v, w = self.values, self.antipodal_values()
        even = float(np.max(np.linalg.norm(v - w, axis=1)))
        odd = float(np.max(np.linalg.norm(v + w, axis=1)))
        return even, odd

    def is_even(self, rtol: float = PARITY_RTOL) -> bool:
        return self.parity_residuals()[0] <= rtol * self.max_norm()

    def is_odd(self, rtol: float = PARITY_RTOL) -> bool:
        return self.parity_residuals()[1] <= rtol * self.max_norm()

    def require_parity(self, parity: str, rtol: float = PARITY_RTOL) -> None:
        ok = self.is_even(rtol) if parity == "even" else self.is_odd(rtol)
        if not ok:
            even, odd = self.parity_residuals()
            res = even if parity == "even" else odd
            raise ParityError(f"section is not {parity}: residual {res:.3e}")

    # -- serialization -------------------------------------------------

    def _columns(self) -> list[str]:
        cols = ["index", "x1", "x2", "x3"]
        for c in range(self.dim):
            cols += [f"re{c}", f"im{c}"]
        return cols

    def _rows(self) -> list[list]:
        rows = []
        for i, (x, v) in enumerate(zip(self.points, self.values)):
            row = [i, *map(float, x)]
            for z in v:
                row += [float(z.real), float(z.imag)]
            rows.append(row)
        return rows

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self._columns())
        for row in self._rows():
            w.writerow([row[0], *(repr(c) for c in row[1:])])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    def to_json(self, path=None) -> str:
        text = json.dumps({"dim": self.dim, "columns": self._columns(),
                           "rows": self._rows()})
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def _from_rows(cls, rows: list[list[float]]) -> "SampledSection":
        rows = sorted(rows, key=lambda r: int(r[0]))
        if [int(r[0]) for r in rows] != list(range(len(rows))):
            raise PairingError("point indices must run 0..n-1")
        arr = np.array([r[1:] for r in rows], dtype=float)
        pts = arr[:, :3]
        vals = arr[:, 3::2] + 1j * arr[:, 4::2]
        return cls(pts, vals)

    @classmethod
    def from_csv(cls, source) -> "SampledSection":
        text = _read_text(source)
        reader = csv.reader(io.StringIO(text))
        next(reader)
        return cls._from_rows([[float(c) for c in row] for row in reader if row])

    @classmethod
    def from_json(cls, source) -> "SampledSection":
        data = json.loads(_read_text(source))
        sec = cls._from_rows(data["rows"])
        if sec.dim != data["dim"]:
            raise ValueError("dim field disagrees with the row width")
        return sec


def _read_text(source) -> str:
    if isinstance(source, Path):
        return source.read_text()
    if isinstance(source, str) and "\n" not in source and not source.lstrip().startswith("{"):
        return Path(source).read_text()
    return source
