import sys

from walters_thermo.cli import main

sys.exit(main())
