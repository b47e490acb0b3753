import sys

from qdlmoment.cli import main

sys.exit(main())
