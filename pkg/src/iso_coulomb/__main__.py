import sys

from iso_coulomb.cli import main

sys.exit(main())
