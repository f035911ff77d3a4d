import logging
import os
import shutil
import tempfile
import unittest

from cfot.framework.logger import CFOTLogger


class TestCFOTLogger(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp(prefix='cfot_logger_')

    def tearDown(self):
        root = logging.getLogger()
        for handler in root.handlers:
            handler.close()
        root.handlers = []
        shutil.rmtree(self.directory)

    def test_level(self):
        CFOTLogger({'log_level': 'debug'})
        self.assertEqual(logging.getLogger().level, logging.DEBUG)
        self.assertEqual(logging.getLogger('numba').level, logging.WARNING)

    def test_log_file(self):
        log_file = os.path.join(self.directory, 'logs', 'run.log')
        CFOTLogger({'log_level': 'info', 'log_file': log_file})

        logging.getLogger('cfot.test').info('written to the file')
        for handler in logging.getLogger().handlers:
            handler.flush()

        with open(log_file) as f:
            self.assertIn('INFO:cfot.test:written to the file', f.read())
