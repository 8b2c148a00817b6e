import sys

from pdmbench.cli import main

sys.exit(main())
