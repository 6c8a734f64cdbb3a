from pydantic_settings import BaseSettings
from pydantic import ConfigDict

class Settings(BaseSettings):
    GROUND_SET_CAP: int = 14
    LIBRARY_VALIDATION: str = "antichain"
    CLI_VALIDATION: str = "full"
    RANDOM_SEED: int = 0
    DIF_BASES_EXHAUSTIVE_LIMIT: int = 500
    DIF_BASES_TRIALS: int = 100
    DEL_INVARIANCE_TRIALS: int = 50
    SUBMODULARITY_CAP: int = 8
    LOCALIZATION_CHECK_CAP: int = 8
    FAMILY_LIMIT: int = 40
    UNIQUENESS_CAP: int = 7
    LOG_LEVEL: str = "WARNING"

    model_config = ConfigDict(env_prefix="MATROID_", env_file=".env", extra="ignore")

settings = Settings()
