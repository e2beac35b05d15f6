import sys

from symbern.cli import main

sys.exit(main())
