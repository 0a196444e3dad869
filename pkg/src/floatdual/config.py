"""Run configuration shared by the CLI and the experiment scripts."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BadParameter


def _default_grid_sizes() -> dict:
    return {2: 4096, 3: 20000, 4: 50000}


@dataclass
class RunConfig:
    incidence_tolerance: float = 1e-9
    bisection_tolerance: float = 1e-12
    grid_sizes: dict = field(default_factory=_default_grid_sizes)
    santalo_residual: float = 1e-10
    rng_seed: int = 0
    output_format: str = "json"

    def validate(self) -> "RunConfig":
        for name in ("incidence_tolerance", "bisection_tolerance", "santalo_residual"):
            if getattr(self, name) <= 0.0:
                raise BadParameter(f"{name} must be positive")
        for dim, size in self.grid_sizes.items():
            if size < 64:
                raise BadParameter(f"grid size for dim {dim} must be >= 64")
        if self.output_format not in ("json", "csv"):
            raise BadParameter("output_format must be 'json' or 'csv'")
        return self

    def grid_size(self, dim: int) -> int:
        return self.grid_sizes.get(dim, _default_grid_sizes().get(dim, 4096))
