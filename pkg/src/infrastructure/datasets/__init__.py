"""Real-data loaders and dataset transforms."""
