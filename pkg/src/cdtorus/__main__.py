import sys

from cdtorus.cli import main

sys.exit(main())
