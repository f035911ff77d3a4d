import logging.config
import os

import coloredlogs

# third party loggers that flood debug output
QUIET_LOGGERS = ('numba', 'matplotlib')


class CFOTLogger():
    """
    Configure the root logger of a CFOT run from the ``[system]`` section

    Console output is colored through coloredlogs. With a ``log_file`` every
    record goes to the file and only warnings and errors reach the console,
    so long training runs stay readable. Python warnings raised by numpy or
    pandas are routed into the log.

    Args:
        config: ``[system]`` section of the config, ``log_level`` and
            ``log_file`` are used
    """

    FMT = '%(levelname)s:%(name)s:%(message)s'
    FILE_FMT = '%(asctime)s %(levelname)s:%(name)s:%(message)s'

    def __init__(self, config):
        self.log_level = str(config.get('log_level', 'info')).upper()
        self.log_file = config.get('log_file', None)

        handlers = {
            'console': {
                'level': self.log_level,
                'formatter': 'standard',
                'class': 'logging.StreamHandler',
                'stream': 'ext://sys.stdout',
            }
        }

        if self.log_file is not None:
            os.makedirs(os.path.dirname(os.path.abspath(self.log_file)),
                        exist_ok=True)
            handlers['console']['level'] = 'WARNING'
            handlers['log_file'] = {
                'level': self.log_level,
                'formatter': 'timestamped',
                'class': 'logging.FileHandler',
                'filename': self.log_file,
                'mode': 'a',
            }

        log_config = {
            'version': 1,
            'disable_existing_loggers': False,
            'formatters': {
                'standard': {'format': self.FMT},
                'timestamped': {'format': self.FILE_FMT},
            },
            'handlers': handlers,
            'loggers': {
                '': {
                    'handlers': list(handlers),
                    'level': self.log_level,
                },
            },
        }
        for name in QUIET_LOGGERS:
            log_config['loggers'][name] = {'level': 'WARNING'}

        logging.config.dictConfig(log_config)
        logging.captureWarnings(True)

        if self.log_file is None:
            coloredlogs.install(level=self.log_level, fmt=self.FMT)
