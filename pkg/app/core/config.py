from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv
import os

load_dotenv()
class Settings(BaseSettings):
    # Application
    APP_NAME: str = os.getenv("APP_NAME", "Nichols Relations")
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    # Workers
    WORKERS: int = int(os.getenv("WORKERS", 1))

    # Identity suites
    DEFAULT_SEED: int = int(os.getenv("DEFAULT_SEED", 1))
    RANDOM_EXPONENT_BOUND: int = int(os.getenv("RANDOM_EXPONENT_BOUND", 4))
    IDENTITY_BRAIDINGS: int = int(os.getenv("IDENTITY_BRAIDINGS", 20))

    # Search bounds
    WITNESS_DEPTH: int = int(os.getenv("WITNESS_DEPTH", 6))
    ENUMERATION_HEIGHT: int = int(os.getenv("ENUMERATION_HEIGHT", 8))

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")

settings = Settings()
