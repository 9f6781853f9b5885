"""
q-congruence-checker: entry point.

All logic lives inside the ``qcheck`` package.
Run with:  uv run python main.py suite
"""

import sys

from qcheck.cli.commands import main

if __name__ == "__main__":
    sys.exit(main())
