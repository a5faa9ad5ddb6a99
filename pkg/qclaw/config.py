import os
from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="QCLAW_", env_file=".env", extra="ignore")

    # Upper bound on worker threads used while exploring exchange graphs; 1 disables the pool
    threads: Optional[int] = None
    log_level: str = "WARNING"
    # Reports carry wall-clock millis only when enabled, so default output is byte-stable
    report_timing: bool = False
    samples: int = 100
    rng_seed: int = 0
    l_max: int = 4

    def worker_count(self) -> int:
        if self.threads is not None:
            return max(1, self.threads)
        return min(4, os.cpu_count() or 1)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()
