"""Two-dimensional bin packing with an absolute factor-2 guarantee at desk scale."""

__version__ = "0.1.0"
