"""
Configuration management for GroupLens.
Environment variables are loaded from .env file if present.
"""
import logging
from functools import lru_cache

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Size guards
    ELEMENT_CAP: int = 5040
    SYMMETRIC_DEGREE_CAP: int = 6
    ENUMERATION_CAP: int = 1_000_000
    MINIMALITY_CAP: int = 24
    LIFT_ENUMERATION_CAP: int = 4096

    # Sampled checks
    SAMPLE_COUNT: int = 1000
    CONTEXT_COUNT: int = 100
    SEED: int = 0

    # Application
    DEBUG: bool = False
    LOG_LEVEL: str = "WARNING"

    @field_validator("LOG_LEVEL", mode="before")
    def normalize_log_level(cls, v: str) -> str:
        """Accept any case, reject names logging does not know."""
        level = str(v).upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"Unknown log level {v!r}")
        return level

    # Model configuration
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="GROUPLENS_",
        case_sensitive=True,
        extra="allow",
    )


@lru_cache()
def get_settings() -> Settings:
    """Create cached settings instance."""
    return Settings()
