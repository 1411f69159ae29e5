import logging
import os

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

__version__ = '1.0.0'

# Configuration from environment
settings = {
    'LOG_LEVEL': os.getenv('TEXTBIN_LOG_LEVEL', 'WARNING'),
    'CONFIG': os.getenv('TEXTBIN_CONFIG', ''),
    'WORKERS': int(os.getenv('TEXTBIN_WORKERS', 4)),
}

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def setup_logging(level=None):
    """Configure the root logger once for command-line use."""
    level = level or settings['LOG_LEVEL']
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger(__name__).setLevel(level)
