"""Transductive generalization lab for graph neural networks."""
