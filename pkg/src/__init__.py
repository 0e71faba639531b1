"""Deterministic cross-chain protocol simulator."""
