"""Two-way assisted capacities of quantum channels."""

__version__ = "1.0.0"
