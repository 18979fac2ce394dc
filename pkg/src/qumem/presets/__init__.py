"""Figure parameter presets."""
