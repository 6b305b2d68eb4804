"""Pytest anchor; keeps the tests directory importable for shared oracles."""
