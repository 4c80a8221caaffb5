import logging
import os

from dotenv import load_dotenv

load_dotenv()

# --- Configuration ---
DEFAULT_EPSILON = 1e-9  # weights closer than this are one critical value
DEFAULT_MARGIN = 0.1  # completion faces get max weight * (1 + margin)
DEFAULT_MAX_D_FACES = 22  # oracle refuses larger candidate sets
DEFAULT_FIELD = "2"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def log_level() -> int:
    """Level named by HOPES_LOG, WARNING when unset or unknown."""
    name = os.getenv("HOPES_LOG", "WARNING").upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.WARNING


def configure_logging():
    logging.basicConfig(level=log_level(), format=LOG_FORMAT)
