"""Run the command line with python -m swarmdeploy."""

from .cli import main

raise SystemExit(main())
