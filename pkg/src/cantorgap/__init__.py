"""Certified thickness and intersection of planar dynamical Cantor sets."""
