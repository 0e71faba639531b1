"""Adapters: metrics export and fixture loading."""
