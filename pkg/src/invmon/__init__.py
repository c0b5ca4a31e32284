"""Tools for special inverse monoids: words, presentations, Schützenberger
approximations, right-cancellative chains, coarse-geometry checks and the
encoding constructions built on them."""

__version__ = "0.1.0"
