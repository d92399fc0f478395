"""Application configuration using Pydantic Settings."""
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import List
import logging


class Settings(BaseSettings):
    log_level: str = "INFO"

    # Numerical tolerances
    eps_pure: float = 1e-9
    symmetry_tol: float = 1e-12
    bona_fide_tol: float = 1e-10
    singular_term_tol: float = 1e-9
    probability_tol: float = 1e-12
    nonnegativity_tol: float = 1e-10
    kraus_tol: float = 1e-10
    covariance_tol: float = 1e-9
    optimizer_xatol: float = 1e-10

    # Sweeps / output
    loss_db_per_km: float = 0.2
    csv_significant_digits: int = 12
    sweep_jobs: int = 1
    show_progress: bool = False

    # Verification harnesses
    default_mu_list: List[float] = [1e2, 1e3, 1e4]
    verify_limit_bound: float = 10.0
    max_telesim_dim: int = 4

    # HTTP surface
    api_host: str = "0.0.0.0"
    api_port: int = 8000

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="TWOWAY_",
        env_ignore_empty=True,
        extra="ignore"
    )


# Global settings + standard logging setup
settings = Settings()

# Standard Python logging (NO loguru)
logging.basicConfig(
    level=getattr(logging, settings.log_level),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

logger.debug("⚙️ Configuration loaded successfully")
