"""
Process-level settings for Ordode.

Values come from the environment (optionally a .env file in the working
directory). Problem-specific knobs live in the problem file instead.
"""

import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field


class Settings(BaseModel):
    """Defaults shared by the services and the CLI."""

    model_config = ConfigDict(frozen=True)

    log_level: str = "WARNING"
    order_depth: int = Field(10_000, ge=1)  # sampled order-certification depth
    tail_tol: float = Field(1e-12, gt=0)
    check_trials: int = Field(1000, ge=1)
    ladder_len: int = Field(40, ge=3)
    plateau_window: int = Field(5, ge=2)
    plateau_rtol: float = Field(0.05, ge=0)

    @classmethod
    def from_env(cls) -> "Settings":
        values = {}
        for name in cls.model_fields:
            raw = os.getenv(f"ORDODE_{name.upper()}")
            if raw is not None and raw.strip():
                values[name] = raw.strip()
        return cls.model_validate(values)


# Global instance (initialized lazily or by the CLI)
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the global settings instance."""
    global _settings
    if _settings is None:
        load_dotenv()
        _settings = Settings.from_env()
    return _settings


def init_settings(settings: Optional[Settings] = None) -> Settings:
    """Replace the global settings (tests and the CLI use this)."""
    global _settings
    _settings = settings if settings is not None else Settings.from_env()
    return _settings


def configure_logging(settings: Settings) -> None:
    """Send library logging to stderr at the configured level."""
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )
