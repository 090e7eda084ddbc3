"""Module entry point for python -m product_percolation."""

import sys

from product_percolation.cli import main

if __name__ == "__main__":
    sys.exit(main())
