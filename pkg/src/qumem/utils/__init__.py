"""Utility modules for qumem."""
