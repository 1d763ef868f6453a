"""rankfraud: search-rank fraud and malware detection for app markets."""

__version__ = "0.1.0"
