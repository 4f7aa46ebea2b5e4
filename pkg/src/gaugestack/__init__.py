"""Presheaves of groupoids, descent and discrete gauge fields."""
__version__ = "0.1.0"
