"""Tools for running and analysing vocabulary-constrained LLM reasoning experiments."""

__version__ = "0.1.0"
