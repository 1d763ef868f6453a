"""Allow running as `python3 -m rankfraud`."""

from rankfraud.cli import main

main()
