"""Data models for qumem."""
