"""Shared pytest configuration (anchors sys.path for helper imports)."""
