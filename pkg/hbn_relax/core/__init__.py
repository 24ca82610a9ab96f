"""Numerical core of hbn-relax."""
