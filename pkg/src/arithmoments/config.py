from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", case_sensitive=False)

    cache_dir: Path = Field(default=Path.home() / ".cache" / "arithmoments", alias="ARITHMOMENTS_CACHE_DIR")
    prime_cache_enabled: bool = Field(default=True, alias="ARITHMOMENTS_PRIME_CACHE")

    segment_size: int = Field(default=1 << 20, alias="ARITHMOMENTS_SEGMENT_SIZE", ge=1024)
    workers: int = Field(default=1, alias="ARITHMOMENTS_WORKERS", ge=1)

    sample_limit: int = Field(default=20_000_000, alias="ARITHMOMENTS_SAMPLE_LIMIT", ge=1)
    histogram_bins: int = Field(default=1 << 16, alias="ARITHMOMENTS_HISTOGRAM_BINS", ge=2)
    histogram_range: float = Field(default=10.0, alias="ARITHMOMENTS_HISTOGRAM_RANGE", gt=0)

    bounded_sup_limit: float = Field(default=10.0, alias="ARITHMOMENTS_BOUNDED_SUP_LIMIT", gt=0)
    bounded_tail_tolerance: float = Field(default=1e-4, alias="ARITHMOMENTS_BOUNDED_TAIL_TOLERANCE", gt=0)

    sim_block_trials: int = Field(default=256, alias="ARITHMOMENTS_SIM_BLOCK_TRIALS", ge=1)
    sim_entry_chunk: int = Field(default=16384, alias="ARITHMOMENTS_SIM_ENTRY_CHUNK", ge=1)

    export_max_rows: int = Field(default=100_000, alias="ARITHMOMENTS_EXPORT_MAX_ROWS", ge=0)
    log_level: str = Field(default="INFO", alias="ARITHMOMENTS_LOG_LEVEL")


def get_settings() -> Settings:
    return Settings()
