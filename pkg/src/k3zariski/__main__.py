import sys

from k3zariski.cli import main

sys.exit(main())
