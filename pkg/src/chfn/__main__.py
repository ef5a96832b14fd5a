import sys

from chfn.cli import main

sys.exit(main())
