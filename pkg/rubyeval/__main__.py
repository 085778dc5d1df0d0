import sys

from rubyeval.cli import main

sys.exit(main())
