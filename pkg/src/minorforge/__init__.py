"""minorforge: exact desk-scale machinery for minor-free graph constructions,
list-coloring lower bounds, and pseudo-random graph properties."""

__version__ = "0.1.0"
