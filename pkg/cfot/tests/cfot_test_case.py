import os
import shutil
import unittest
from pathlib import Path

from inicheck.config import UserConfig
from inicheck.tools import get_user_config

import cfot


class CFOTTestCase(unittest.TestCase):
    """
    Shared setup for tests that run an experiment. Parses the test config,
    a short Markovian run with a tiny network, and gives every test class a
    fresh output directory that is removed afterwards.
    """

    BASE_INI_FILE_NAME = 'config.ini'

    test_dir = Path(cfot.__file__).parent.joinpath('tests')
    config_file = os.path.join(test_dir, BASE_INI_FILE_NAME)

    @classmethod
    def base_config_copy(cls) -> UserConfig:
        """
        Return a copy of the default test config to manipulate for specific
        test cases

        :return: UserConfig object
        """
        return get_user_config(cls.config_file, modules='cfot')

    @classmethod
    def setUpClass(cls):
        cls.base_config = get_user_config(cls.config_file, modules='cfot')
        cls.create_output_dir()

    @classmethod
    def tearDownClass(cls):
        cls.remove_output_dir()
        delattr(cls, 'output_dir')

    @classmethod
    def create_output_dir(cls):
        folder = os.path.join(cls.base_config.cfg['output']['out_location'])

        # Remove any potential files to ensure fresh run
        if os.path.isdir(folder):
            shutil.rmtree(folder)

        os.makedirs(folder)
        cls.output_dir = Path(folder)

    @classmethod
    def remove_output_dir(cls):
        if hasattr(cls, 'output_dir') and os.path.exists(cls.output_dir):
            shutil.rmtree(cls.output_dir, ignore_errors=True)
