"""
    This module implements a recording logging handler. Log entries are kept as
    plain dicts in a bounded history so a run can embed its own warnings into the
    output manifest.
"""

import logging
from collections import deque


class RecordingLogHandler(logging.Handler):

    HISTORY_SIZE = 500

    def __init__(self, module: str):
        """
            Init
        """
        logging.Handler.__init__(self)

        self.module = module
        self.entries = deque(maxlen=self.HISTORY_SIZE)


    def emit(self, record):
        """
            Store the log entry
        """
        try:
            message = record.getMessage()
        except (TypeError, ValueError):
            message = str(record.msg)

        self.entries.append({
            "module": self.module,
            "logger": record.name,
            "level": record.levelname.lower(),
            "created": record.created,
            "message": message
        })
