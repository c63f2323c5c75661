#!/usr/bin/env python3
import unittest
import logging
import tempfile
import os

from geoent.core.basemodule import BaseRunner
from geoent.core.log.record_handler import RecordingLogHandler


class LogTester(BaseRunner):
    """
        Tester runner to produce log entries
    """


class TestLogging(unittest.TestCase):
    """
        Testcase for the runner log handlers
    """

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.runner = LogTester(log_path=self.tmp.name)

    def tearDown(self):
        self.runner.close()
        for h in list(logging.getLogger("geoent").handlers):
            if getattr(h, "_geoent", False):
                logging.getLogger("geoent").removeHandler(h)
                h.close()
        self.tmp.cleanup()

    def test_history_collects_library_warnings(self):
        for i in range(40):
            logging.getLogger("geoent.optimize.grid").warning("testing #%d", i)

        entries = self.runner.warnings()
        self.assertEqual(len(entries), 40)
        self.assertEqual(entries[0]["message"], "testing #0")
        self.assertEqual(entries[-1]["level"], "warning")
        self.assertEqual(entries[-1]["logger"], "geoent.optimize.grid")

    def test_debug_is_not_recorded(self):
        self.runner.log.debug("quiet")
        self.runner.log.info("quiet")
        self.assertEqual(self.runner.warnings(), [])

    def test_log_file_created(self):
        self.runner.log.warning("to file")
        for h in logging.getLogger("geoent").handlers:
            h.flush()
        self.assertTrue(os.path.exists(os.path.join(self.tmp.name, "LogTester.log")))

    def test_history_is_bounded(self):
        handler = RecordingLogHandler("bounded")
        logger = logging.getLogger("geoent.bounded")
        logger.addHandler(handler)
        try:
            for i in range(RecordingLogHandler.HISTORY_SIZE + 10):
                logger.warning("entry %d", i)
        finally:
            logger.removeHandler(handler)
        self.assertEqual(len(handler.entries), RecordingLogHandler.HISTORY_SIZE)
        self.assertEqual(handler.entries[0]["message"], "entry 10")

    def test_close_detaches_history(self):
        self.runner.close()
        logging.getLogger("geoent").warning("after close")
        self.assertEqual(self.runner.warnings(), [])


if __name__ == '__main__':
    unittest.main()
