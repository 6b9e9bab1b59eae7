"""Entry point for ``python -m fairdec``."""

import sys

from fairdec.cli import main

if __name__ == "__main__":
    sys.exit(main())
