"""Package entry point.
Hands the command line over to the CLI app
"""

import sys

from dualfuse.cli.app import main

if __name__ == '__main__':
    sys.exit(main())
