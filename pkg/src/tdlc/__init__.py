"""Exact scale and tidy-subgroup computations for endomorphisms."""
