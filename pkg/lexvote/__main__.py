import sys

from lexvote.cli import main

sys.exit(main())
