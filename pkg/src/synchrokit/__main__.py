"""Allow ``python -m synchrokit``."""

from .cli import main

raise SystemExit(main())
