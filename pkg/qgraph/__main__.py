import sys

from qgraph.cli import main

sys.exit(main())
