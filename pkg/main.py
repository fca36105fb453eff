import os
import sys
import platform
import warnings

from dotenv import load_dotenv
from loguru import logger

load_dotenv()

logger.remove()
logger.add(sys.stderr, level=os.getenv("ORRPI_LOG_LEVEL", "INFO").upper())

if platform.system() == 'Windows':
    warnings.simplefilter("ignore")

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
