"""Real 1-forms sampled on a uniform (r, t) cusp grid."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CuspGrid:
    """``n_r + 1`` equispaced depths on ``[r_lo, r_hi]`` times ``n_t`` periodic
    horocycle points ``j / n_t``."""

    r_lo: float
    r_hi: float
    n_r: int
    n_t: int

    def __post_init__(self):
        if not (math.isfinite(self.r_lo) and math.isfinite(self.r_hi) and self.r_lo < self.r_hi):
            raise ValueError(f"need finite r_lo < r_hi, got [{self.r_lo}, {self.r_hi}]")
        if self.n_r < 2 or self.n_t < 3:
            raise ValueError(f"grid too small: n_r={self.n_r}, n_t={self.n_t}")

    @property
    def r_values(self) -> np.ndarray:
        return self.r_lo + (self.r_hi - self.r_lo) * (np.arange(self.n_r + 1) / self.n_r)

    @property
    def t_values(self) -> np.ndarray:
        return np.arange(self.n_t) / self.n_t

    @property
    def h_r(self) -> float:
        return (self.r_hi - self.r_lo) / self.n_r

    @property
    def h_t(self) -> float:
        return 1.0 / self.n_t

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_r + 1, self.n_t)

    def refined(self) -> "CuspGrid":
        """Same band with both spacings halved."""
        return CuspGrid(self.r_lo, self.r_hi, 2 * self.n_r, 2 * self.n_t)


@dataclass(frozen=True, eq=False)
class GriddedForm:
    """``comp_r dr + comp_t dt`` sampled on a :class:`CuspGrid`; rows follow r."""

    grid: CuspGrid
    comp_r: np.ndarray
    comp_t: np.ndarray

    def __post_init__(self):
        comp_r = np.asarray(self.comp_r, dtype=float)
        comp_t = np.asarray(self.comp_t, dtype=float)
        if comp_r.shape != self.grid.shape or comp_t.shape != self.grid.shape:
            raise ValueError(
                f"component shapes {comp_r.shape}, {comp_t.shape} do not match grid {self.grid.shape}"
            )
        object.__setattr__(self, "comp_r", comp_r)
        object.__setattr__(self, "comp_t", comp_t)

    @property
    def r_values(self) -> np.ndarray:
        return self.grid.r_values

    @property
    def t_values(self) -> np.ndarray:
        return self.grid.t_values

    def to_dict(self) -> dict:
        g = self.grid
        return {
            "r_lo": g.r_lo,
            "r_hi": g.r_hi,
            "n_r": g.n_r,
            "n_t": g.n_t,
            "comp_r": self.comp_r.tolist(),
            "comp_t": self.comp_t.tolist(),
        }

    @classmethod
    def from_mapping(cls, doc) -> "GriddedForm":
        try:
            grid = CuspGrid(float(doc["r_lo"]), float(doc["r_hi"]), int(doc["n_r"]), int(doc["n_t"]))
            return cls(grid, np.array(doc["comp_r"], dtype=float), np.array(doc["comp_t"], dtype=float))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed gridded form document: {exc}") from None

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "GriddedForm":
        return cls.from_mapping(json.loads(text))
