"""Process-pool mapping and JSON conversion helpers."""
