"""Allow ``python -m dh_pencil``."""

import sys

from .main import main

sys.exit(main())
