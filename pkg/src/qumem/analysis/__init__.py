"""Curves, crossover search and validation harness."""
