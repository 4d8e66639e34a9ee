import sys

from ffrt.cli import main

sys.exit(main())
