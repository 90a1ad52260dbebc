"""Information distance of lists: compressor estimates, exact toy oracles and property checks."""

__version__ = "0.1.0"
