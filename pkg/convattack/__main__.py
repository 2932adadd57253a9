import sys

from convattack.harness.cli import main

sys.exit(main())
