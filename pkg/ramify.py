#!/usr/bin/env python3
"""
Ramify - ramification invariants of torsors over P^1 in characteristic p.

Usage:
    python ramify.py symbol --p 2 --m 1 --f "[1/u]" --g "1-u"
    python ramify.py verify --seed 0
    python ramify.py --help
"""
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))
sys.path.insert(0, str(Path(__file__).parent))

from cli import main

if __name__ == "__main__":
    main()
