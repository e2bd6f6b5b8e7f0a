"""Runtime settings, read from ``SUBCONJ_*`` environment variables."""

from __future__ import annotations

from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Knobs of the search procedures.

    Command-line flags override the environment by passing keyword arguments.
    """

    model_config = SettingsConfigDict(env_prefix="SUBCONJ_", frozen=True, extra="ignore")

    jobs: int = Field(default=1, ge=1)
    k_max: int | None = Field(default=None, ge=2)
    symmetry: bool = True
    aperiodicity_bound: int | None = Field(default=None, ge=1)
    max_power_length: int = Field(default=4096, ge=2)
    oracle_budget: int = Field(default=1_000_000, ge=1)
    budget: float | None = Field(default=None, gt=0)
    cache: Path | None = None
    log_level: str = "WARNING"

    def refutation_depth(self, length: int, size: int) -> int:
        """Return the largest factor length compared when looking for a refuting word.

        Args:
            length: The substitution length L.
            size: The candidate alphabet size c.

        Returns:
            ``k_max`` if set, else 2 * L * c**2.

        """
        return self.k_max if self.k_max is not None else 2 * length * size**2

    def aperiodicity_depth(self, length: int, size: int) -> int:
        """Return the largest factor length used by the aperiodicity test."""
        return self.aperiodicity_bound if self.aperiodicity_bound is not None else length * size**2 + 1
