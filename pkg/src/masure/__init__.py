"""Exact computations in the Bruhat-Tits tree of SL2 over a discretely
valued field, Kac-Moody root data and Weyl groups, Tits cones, Hecke
paths, and the completed unipotent group of affine SL2."""

__version__ = "0.1.0"
