import sys

from salbp.cli import main

sys.exit(main())
