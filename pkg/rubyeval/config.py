from typing import Literal

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    TOKEN_MODE: Literal["lexical", "whitespace", "character"] = "lexical"
    BLEU_MAX_N: int = 4
    BLEU_BP_MODE: Literal["ratio", "exponential"] = "ratio"
    BLEU_ZERO_POLICY: Literal["score-zero", "add-one-smoothing"] = "score-zero"
    STS_NORM: Literal["max-length", "reference-length"] = "max-length"
    TED_EXACT_LIMIT: int = 200
    # 1-paths plus (p,q)-nodes
    GRS_MAX_PATH_LENGTH: int = 1
    RANSAC_EPSILON: float = 0.1
    RANSAC_ITERATIONS: int = 500
    RANSAC_RUNS: int = 10
    PERMUTE_MAX_ATTEMPTS: int = 200
    WORKERS: int = 1
    LOG_LEVEL: str = "INFO"

    class Config:
        env_file = ".env"
        env_prefix = "RUBY_"


settings = Settings()
