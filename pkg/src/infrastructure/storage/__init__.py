"""Storage components for datasets, checkpoints, results and plots."""
