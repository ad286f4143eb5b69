"""Entry point for ``python -m laneutf``."""

import sys

from laneutf.cli import main

if __name__ == "__main__":
    sys.exit(main())
