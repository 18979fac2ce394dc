"""Tests for qumem."""
