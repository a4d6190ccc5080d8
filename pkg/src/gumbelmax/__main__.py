import sys

from gumbelmax.cli import main

sys.exit(main())
