"""Configuration management for the ParQSym toolkit."""

from typing import List
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Verification defaults loaded from environment variables or .env file."""

    # Truncation of the verification suites
    default_max_order: int = Field(3, ge=0)
    exhaustive_order: int = Field(2, ge=0)

    # Enumeration guard; Bell(10) = 115975 diagrams at order 5
    enum_order_limit: int = Field(4, ge=0)

    # q parameters tried by the suites (q = -1 is rejected)
    q_values: List[str] = ["1", "2", "-3", "1/2"]

    # Random sampling above the exhaustive order
    sample_size: int = Field(100, ge=0)
    random_seed: int = 20240601

    # Reports keep at most this many counterexamples per check
    max_counterexamples: int = Field(25, ge=1)

    log_level: str = "WARNING"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="PARQSYM_",
        case_sensitive=False
    )


# Global settings instance
settings = Settings()
