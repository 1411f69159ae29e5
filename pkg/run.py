# PURPOSE: Command-line entry point, e.g. `python run.py binarize in.pgm out.pbm`.
import sys

from Textimg2Bin.cli import main

if __name__ == '__main__':
    sys.exit(main())
