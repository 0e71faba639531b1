"""Protocol modules."""
