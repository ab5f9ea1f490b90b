import os
import logging
from typing import Any, Dict

logger = logging.getLogger(__name__)

ENV_FILE = 'attacks_config.env'
ENGINES = ('main', 'oracle', 'both')


class ConfigError(ValueError):
    """Raised when a configuration value cannot be used."""
    pass


# load enviroment variables

def load_env_variables(env_file: str = ENV_FILE) -> None:
    try:
        from dotenv import load_dotenv
        # load default .env first
        load_dotenv()
        # a project-specific env file overrides it
        if os.path.exists(env_file):
            load_dotenv(env_file, override=True)
            logger.info(f"Environment variables loaded from {env_file}.")
        else:
            logger.info("Environment variables loaded (from .env if present).")
    except ImportError:
        logger.warning("python-dotenv is not installed; set the environment variables manually.")


def _int_setting(name: str, default: int, minimum: int) -> int:
    raw = os.getenv(name, str(default)).strip()
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from e
    if value < minimum:
        raise ConfigError(f"{name} must be at least {minimum}, got {value}")
    return value


def load_config() -> Dict[str, Any]:

    config = {
        'log_level': os.getenv('ATTACKS_LOG_LEVEL', 'WARNING').strip().upper() or 'WARNING',
        'oracle_max_states': _int_setting('ATTACKS_ORACLE_MAX_STATES', 200000, 1),
        'ilp_enum_volume': _int_setting('ATTACKS_ILP_ENUM_VOLUME', 64, 1),
        'ilp_dump_dir': os.getenv('ATTACKS_ILP_DUMP_DIR', '').strip() or None,
        'output_dir': os.getenv('ATTACKS_OUTPUT_DIR', 'outputs').strip() or 'outputs',
        'engine': os.getenv('ATTACKS_ENGINE', 'main').strip().lower() or 'main',
    }

    if config['log_level'] not in {'DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'}:
        raise ConfigError(f"Unknown ATTACKS_LOG_LEVEL: {config['log_level']}")
    if config['engine'] not in ENGINES:
        raise ConfigError(f"ATTACKS_ENGINE must be one of {', '.join(ENGINES)}, got {config['engine']!r}")

    logger.info("Solver configuration loaded.")
    return config
