"""Shared primitives: errors, enums, encodings."""
