"""Dense GNN engine with manual reverse-mode gradients."""
