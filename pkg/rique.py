#! /usr/bin/env python3

"""
Main module for the rique command-line tools.

To run the script, navigate to the top-level directory of this project
in a terminal window and execute:
    Unix:
        python3 rique.py <command> ...

    Windows:
        py rique.py <command> ...

For example:
    python3 rique.py validate fixtures/k7.graph fixtures/k7_two_page.layout
    python3 rique.py riquenumber fixtures/k5.graph --exact
    python3 rique.py onesided fixtures/k4.graph --embedding fixtures/k4_plane.emb
    python3 rique.py bounds 10

You can view the full list of command-line arguments by adding `-h` to
the end of the command. e.g:
    python3 rique.py -h
    python3 rique.py riquenumber -h
"""

import sys

from py_rique.ui.cli import main

if __name__ == "__main__":
    sys.exit(main())
