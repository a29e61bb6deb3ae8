import logging
import os
from pathlib import Path
from typing import Dict

import orjson
from tacit_core import SolverConfig

APP_NAME = "tacit-cli"
SEED_ENV = "TACIT_SEED"

# Standard config paths
CONFIG_DIR = Path(os.environ.get("XDG_CONFIG_HOME", Path.home() / ".config")) / APP_NAME
CONFIG_FILE = CONFIG_DIR / "config.json"

logger = logging.getLogger(__name__)


def get_config() -> Dict:
    """
    Reads the user's solver defaults. A missing or unreadable file yields {}.
    """
    if not CONFIG_FILE.exists():
        return {}

    try:
        data = orjson.loads(CONFIG_FILE.read_bytes())
    except (OSError, orjson.JSONDecodeError) as e:
        logger.warning("ignoring unreadable config %s: %s", CONFIG_FILE, e)
        return {}
    if not isinstance(data, dict):
        logger.warning("ignoring config %s: expected a JSON object", CONFIG_FILE)
        return {}
    return data


def save_config(values: Dict):
    """Merges `values` into the config file."""
    SolverConfig.from_dict(values)
    CONFIG_DIR.mkdir(parents=True, exist_ok=True)
    data = get_config()
    data.update(values)
    CONFIG_FILE.write_bytes(orjson.dumps(data, option=orjson.OPT_INDENT_2))


def solver_config(**overrides) -> SolverConfig:
    """
    Config file, then the TACIT_SEED environment variable, then command-line
    overrides (None means "not given").
    """
    values = get_config()
    seed = os.environ.get(SEED_ENV)
    if seed is not None:
        try:
            values["seed"] = int(seed)
        except ValueError:
            logger.warning("ignoring non-integer %s=%r", SEED_ENV, seed)
    return SolverConfig.from_dict(values).update(**overrides)
