import os

class Config:
    """Process-level settings for the simulator, read from the environment."""

    # Application settings
    DEBUG = os.getenv("DEBUG", "False") == "True"

    # Sweep execution
    SWEEP_WORKERS = int(os.getenv("SWEEP_WORKERS", "1"))
    SWEEP_DEFAULT_SEED = int(os.getenv("SWEEP_DEFAULT_SEED", "0"))

    # Logging
    SWEEP_LOG_LEVEL = "DEBUG" if DEBUG else os.getenv("SWEEP_LOG_LEVEL", "INFO")
    SWEEP_LOG_DIR = os.getenv("SWEEP_LOG_DIR", "logs")
