"""Core modules for qumem."""
