"""Monte Carlo estimators."""
