"""
    Utils for loading geoent configurations
"""

import os
import math
import yaml
from typing import Any, Dict, Optional



_dir: str
_globals: Dict[str, Any] = None

if os.getenv("GEOENT_CFG"):
    _dir = os.getenv("GEOENT_CFG")
else:
    _dir = os.path.join(os.path.expanduser("~"), ".geoent")


# Used for every key missing from globals.yaml (or when the file is absent)
DEFAULTS: Dict[str, Any] = {
    "log_path": None,
    "log_level": "INFO",
    "samples": 100_000,
    "seed": 0,
    "phi": math.pi / 3,
    "stall_window": 10_000,
    "workers": 1,
    "refine_tol": 1e-12,
    "refine_max_sweeps": 10_000,
}


def cfg_path(filename: Optional[str]=None) -> str:
    """
    Return an absolute path to config directory or a file located in config directory.

    Args:
        filename: Optional filename to be appended to the path.

    Returns:
        Absolute config path/filename as a string.
    """
    global _dir
    if filename is not None:
        return os.path.join(_dir, filename)
    return _dir


def load_globals(reload: bool=False) -> Dict[str, Any]:
    """
    Load global settings from the geoent config directory.
    If the function has been called previously the dict is returned
    from cache instead of reloading the file.

    Args:
        reload: Ignore the cache and read the file again.

    Returns:
        Dictionary containing all the global definitions, defaults filled in.
    """
    global _globals
    if _globals is not None and not reload: # Cached
        return _globals

    settings = dict(DEFAULTS)
    try:
        with open(cfg_path("globals.yaml"), "r") as file:
            loaded = yaml.safe_load(file) or {}
    except FileNotFoundError:
        loaded = {}

    if not isinstance(loaded, dict):
        raise ValueError(f"'{cfg_path('globals.yaml')}' must contain a mapping, got {type(loaded)}")

    settings.update(loaded)
    _globals = settings
    return _globals


def master_seed(cli_seed: Optional[int]=None) -> int:
    """
    Resolve the master seed: command line first, then GEOENT_SEED, then globals.yaml.
    """
    if cli_seed is not None:
        return int(cli_seed)
    env_seed = os.getenv("GEOENT_SEED")
    if env_seed:
        try:
            return int(env_seed, 0)
        except ValueError:
            raise ValueError(f"GEOENT_SEED must be an integer, got {env_seed!r}")
    return int(load_globals()["seed"])


def create_template_config() -> None:
    """
    Create template configuration directory.
    """

    print(f"Creating configure in {_dir}")

    # Create folders
    try:
        os.mkdir(_dir)
        os.mkdir(os.path.join(_dir, "logs"))
    except FileExistsError:
        print(f"Directory already exists! Exiting...")
        return


    print("Creating 'globals.yaml' file")
    with open(os.path.join(_dir, "globals.yaml"), "x") as file:
        file.write(
            f"log_path: {os.path.join(_dir, 'logs')}\n"
            f"log_level: INFO\n"
            f"seed: 0                  # Master seed when --seed and GEOENT_SEED are absent\n"
            f"samples: 100000          # Random samples per optimization case\n"
            f"stall_window: 10000      # Samples without improvement counted as 'steady'\n"
            f"phi: 1.0471975511965976  # Table phase (pi/3)\n"
            f"workers: 1               # Worker processes for table rows\n"
            f"refine_tol: 1.0e-12\n"
            f"refine_max_sweeps: 10000\n"
        )
