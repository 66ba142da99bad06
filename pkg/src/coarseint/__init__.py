"""Word metrics on the integers with power generating sets.

Core layers:

- `digits`: balanced signed-digit representations and the word metric.
- `oracle`: search-based lengths used to recheck the digit formula.
- `approx`: finite-precision residue arithmetic and divergence witnesses.
- `spectra`: empirical classification of which multiplication maps are
  invertible up to bounded distance.
- `profinite`: the same questions for metrics built from a finite set
  of primes.
- `rectify`: partitions of the line into generator translates and
  bijective replacements for coarse maps.

`service` exposes these as a small HTTP API; `cli` is a thin client
over the same handlers.
"""

__version__ = "0.1.0"
