#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Run the celldiff command line from a source checkout
"""

from celldiff.cli import main

if __name__ == '__main__':
    main()
