"""Configuration management from environment variables"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Config:
    """Process-level settings from environment variables.

    Nothing here is required; run parameters live in run-config files
    (see app.run_config).
    """

    # Logging
    LOG_LEVEL = os.getenv("ZALM_LOG_LEVEL", "INFO")
    LOG_DIR = os.getenv("ZALM_LOG_DIR", "")

    # Threads for sweeps and shear scans; the Monte Carlo takes sim.workers
    WORKERS = int(os.getenv("ZALM_WORKERS", "1"))

    @classmethod
    def validate(cls):
        """Validate environment configuration"""
        errors = []

        if cls.LOG_LEVEL.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            errors.append(f"ZALM_LOG_LEVEL must be a logging level name, got {cls.LOG_LEVEL!r}")

        if cls.WORKERS < 1:
            errors.append(f"ZALM_WORKERS must be at least 1, got {cls.WORKERS}")

        if errors:
            raise ValueError("Configuration errors:\n" + "\n".join(f"  - {e}" for e in errors))

        return True
