# Configuration package for the application
import logging
import sys
from functools import lru_cache
from typing import Literal, Optional

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"


class Settings(BaseSettings):
    """Numerical defaults, overridable through ``KPRAB_*`` environment variables."""

    model_config = SettingsConfigDict(env_prefix="KPRAB_", env_file=".env", extra="ignore")

    # k-Mittag-Leffler series
    ml_tol: float = Field(1e-12, gt=0, lt=1)
    ml_max_terms: int = Field(10_000, ge=1)
    ml_chunk_size: int = Field(65_536, ge=1)

    # singular quadrature
    quad_scheme: Literal["graded", "jacobi"] = "jacobi"
    quad_panels: int = Field(32, ge=1)
    quad_order: int = Field(16, ge=1)
    quad_tol: float = Field(1e-10, gt=0)
    quad_max_refinements: int = Field(6, ge=0)
    hw_tol: float = Field(1e-8, gt=0)

    # finite differences for the derivative
    fd_step_fraction: float = Field(1e-3, gt=0)
    fd_tol: float = Field(1e-6, gt=0)

    # spectral solver
    power_tol: float = Field(1e-10, gt=0)
    power_max_iter: int = Field(20_000, ge=1)
    power_stall_window: int = Field(200, ge=2)
    nystrom_nodes: int = Field(128, ge=8)

    log_level: str = "WARNING"


@lru_cache
def get_settings() -> Settings:
    return Settings()


def configure_logging(level: Optional[str] = None) -> None:
    """Attach a single stderr handler to the ``app`` logger tree."""
    logger = logging.getLogger("app")
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
    logger.setLevel((level or get_settings().log_level).upper())
