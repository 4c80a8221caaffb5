import sys

from hopes.cli import main

sys.exit(main())
