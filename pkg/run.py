"""
Simple script to run the qtrace command line.
"""
import sys

from src.main import main

if __name__ == "__main__":
    sys.exit(main())
