"""Allow ``python -m ixm`` to behave like the ``ixm`` console script."""

import sys

from .cli import main

sys.exit(main())
