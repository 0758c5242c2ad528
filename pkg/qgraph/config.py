"""
Runtime settings.

Values come from environment variables, optionally seeded from a local
.env file. Thresholds default to the acceptance values used by the
validation tables.
"""

import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator


class Settings(BaseModel):
    threads: int = Field(default=1, ge=1)
    tol_ortho: float = Field(default=1e-13, gt=0)
    tol_parseval: float = Field(default=1e-13, gt=0)
    tol_roundtrip: float = Field(default=1e-13, gt=0)
    tol_oracle: float = Field(default=1e-12, gt=0)
    seed: int = Field(default=0, ge=0)
    output_dir: str = "output"

    @field_validator("output_dir")
    @classmethod
    def _strip_dir(cls, value: str) -> str:
        return value.strip() or "output"

    @classmethod
    def from_env(cls) -> "Settings":
        """Read QG_* variables (after loading .env if present)"""
        load_dotenv()
        return cls(
            threads=int(os.getenv("QG_THREADS", "1")),
            tol_ortho=float(os.getenv("QG_TOL_ORTHO", "1e-13")),
            tol_parseval=float(os.getenv("QG_TOL_PARSEVAL", "1e-13")),
            tol_roundtrip=float(os.getenv("QG_TOL_ROUNDTRIP", "1e-13")),
            tol_oracle=float(os.getenv("QG_TOL_ORACLE", "1e-12")),
            seed=int(os.getenv("QG_SEED", "0")),
            output_dir=os.getenv("QG_OUTPUT_DIR", "output"),
        )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings.from_env()
