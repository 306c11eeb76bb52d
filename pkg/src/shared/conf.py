import os
import logging
from dotenv import load_dotenv


load_dotenv(override=True)
logger = logging.getLogger("CONFIG_SHARED")


class Config:
    """Centralized shared application configuration."""

    SPEED_OF_LIGHT = float(os.getenv("KDP_SPEED_OF_LIGHT", "1.0"))
    # l0 in the first-order equation; drops out of every physical result
    FUNDAMENTAL_LENGTH = float(os.getenv("KDP_FUNDAMENTAL_LENGTH", "1.0"))

    ALGEBRA_TOLERANCE = float(os.getenv("KDP_ALGEBRA_TOLERANCE", "1e-12"))
    RANK_THRESHOLD = float(os.getenv("KDP_RANK_THRESHOLD", "1e-9"))
    MAX_WORD_LENGTH = int(os.getenv("KDP_MAX_WORD_LENGTH", "12"))

    RANDOM_SEED = int(os.getenv("KDP_RANDOM_SEED", "20240611"))
    LOG_LEVEL = os.getenv("KDP_LOG_LEVEL", "INFO")

    @classmethod
    def validate(cls):
        """Validate the shared configuration settings."""
        if cls.SPEED_OF_LIGHT <= 0:
            logger.error("KDP_SPEED_OF_LIGHT must be positive")
            return False
        if cls.FUNDAMENTAL_LENGTH <= 0:
            logger.error("KDP_FUNDAMENTAL_LENGTH must be positive")
            return False
        if cls.ALGEBRA_TOLERANCE < 0:
            logger.error("KDP_ALGEBRA_TOLERANCE must be non-negative")
            return False
        if not 0 < cls.RANK_THRESHOLD < 1:
            logger.error("KDP_RANK_THRESHOLD must lie in (0, 1)")
            return False
        if cls.MAX_WORD_LENGTH < 1:
            logger.error("KDP_MAX_WORD_LENGTH must be a positive integer")
            return False
        if cls.RANDOM_SEED < 0:
            logger.error("KDP_RANDOM_SEED must be a non-negative integer")
            return False
        if cls.LOG_LEVEL.upper() not in logging.getLevelNamesMapping():
            logger.error(f"KDP_LOG_LEVEL {cls.LOG_LEVEL} is not a logging level")
            return False

        logger.info("Configuration validated successfully")
        return True


# Validate configuration on module import
Config.validate()
