#!/usr/bin/env python
import logging
import sys

from timearrow.cli import main


if __name__ == "__main__":
    logging.basicConfig(format='%(message)s', level=logging.INFO)
    sys.exit(main())
