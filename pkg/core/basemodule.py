"""
BaseRunner is the base class for all the geoent command runners.
"""

import os
import logging
import logging.handlers
from os.path import join as path_join
from typing import Any, Dict, List, Optional

from .config import load_globals
from .log.record_handler import RecordingLogHandler


# Define what is being imported by default
__all__ = [
    "BaseRunner",
    "VerificationFailed",
]


class VerificationFailed(Exception):
    """
        A verification suite observed a violated property.
    """


class BaseRunner:
    """
    Common plumbing for the runners: settings and logging.
    """

    def __init__(self,
                 log_path: Optional[str]=None,
                 module_name: Optional[str]=None,
                 debug: bool=False,
                 settings: Optional[Dict[str, Any]]=None,
                 **kwargs):
        """
        Initialisation

        Args:
            log_path: Directory for the rotating log file. None disables file logging.
            module_name: Name used to identify the runner in logs.
            debug: Enable debug level logging.
            settings: Overrides for the globals.yaml values.
        """
        self.debug = debug
        self.settings = dict(load_globals())
        if settings:
            self.settings.update(settings)
        self.settings.update(kwargs)

        if not module_name:
            module_name = str(self.__class__.__name__)
        self.module_name = module_name

        self.log = None
        self.history = None
        self.create_log_handlers(log_path if log_path is not None else self.settings.get("log_path"), module_name)

    def create_log_handlers(self, log_path: Optional[str], module_name: str) -> None:
        """
            Create file (+ stderr) log handlers for logging

            params:
                log_path:    Directory for log file
                module_name: Name used to identify module
        """

        # Children of "geoent" so the library modules share the handlers
        self.log = logging.getLogger(f"geoent.{module_name}")
        root = logging.getLogger("geoent")
        level = logging.DEBUG if self.debug else getattr(logging, str(self.settings.get("log_level", "INFO")).upper(), logging.INFO)
        root.setLevel(level)
        self.log.setLevel(level)

        formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')

        # Handlers are attached once per process
        if not any(getattr(h, "_geoent", False) for h in root.handlers):
            if log_path:
                if not os.path.isdir(log_path):
                    os.makedirs(log_path, exist_ok=True)
                log_file = path_join(log_path, module_name + ".log")
                file_handler = logging.handlers.RotatingFileHandler(log_file, maxBytes=int(2e6), backupCount=5)
                file_handler.setFormatter(formatter)
                file_handler._geoent = True
                root.addHandler(file_handler)

            # stdout is reserved for the JSON payload
            stderr_handler = logging.StreamHandler()
            stderr_handler.setFormatter(formatter)
            stderr_handler.setLevel(logging.WARNING if not self.debug else logging.DEBUG)
            stderr_handler._geoent = True
            root.addHandler(stderr_handler)

        # Warnings of this run are embedded into the output manifest
        self.history = RecordingLogHandler(module_name)
        self.history.setLevel(logging.WARNING)
        root.addHandler(self.history)

    def warnings(self) -> List[Dict[str, Any]]:
        """
        Warnings logged since this runner was created.
        """
        return list(self.history.entries) if self.history is not None else []

    def close(self) -> None:
        """
        Detach the per-run history handler.
        """
        if self.history is not None:
            logging.getLogger("geoent").removeHandler(self.history)
            self.history = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False
