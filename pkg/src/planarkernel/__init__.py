"""Sublinear-space style kernelization of planar Dominating Set and Vertex Cover."""

__version__ = "0.1.0"
