# backend/app/core/config.py
from functools import lru_cache
from pathlib import Path
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    PROJECT_NAME: str = "dmlpanel"
    VERSION: str = "1.0.0"

    OUTPUT_DIR: Path = Path("outputs")

    SEED: Optional[int] = None
    THREADS: Optional[int] = Field(default=None, ge=1)
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    DEFAULT_PROFILE: Literal["desk", "paper", "full"] = "desk"

    class Config:
        env_prefix = "DMLPANEL_"
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"


@lru_cache()
def get_settings() -> Settings:
    """
    Crea una instancia única de Settings que se reutiliza.
    Las variables de entorno DMLPANEL_* sobrescriben los valores por defecto.
    """
    return Settings()
