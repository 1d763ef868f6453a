"""Bundled data files: permission catalog, lexicons, sentiment corpus."""
