#!/usr/bin/env python3
"""
Main entry point for the pinskerlab command line.
"""

if __name__ == "__main__":
    import sys
    from pinskerlab.cli.main import main
    sys.exit(main())
