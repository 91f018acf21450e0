"""
Application settings loaded from the environment (prefix QTRACE_) and an optional .env file.
"""
from functools import lru_cache
from typing import Literal

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from .env file
load_dotenv()

LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="QTRACE_", extra="ignore")

    # largest p for which the symmetric group is enumerated (5040 terms at p = 7);
    # --force lifts it to --max-p for one command
    enumeration_bound: int = Field(default=7, ge=1, le=9)
    max_rank: int = Field(default=3, ge=1)
    default_max_p: int = Field(default=5, ge=1)
    random_samples: int = Field(default=20, ge=1)
    random_seed: int = 20240101
    entry_span: int = Field(default=2, ge=1)
    log_level: Literal["CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"] = "WARNING"
    log_format: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_log_level(cls, v):
        return v.strip().upper() if isinstance(v, str) else v


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Get the process-wide settings (lazy, cached)."""
    return Settings()
