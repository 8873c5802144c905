"""Dimer models on the 2-torus: quivers, perfect matchings, consistency.

Submodules:
  surface   - DIMER format, torus tilings, dual quivers, superpotentials
  matchings - perfect matchings, the matching polygon, BvN decomposition
  symmetry  - weight functions, R-symmetries, exact rational feasibility
  zigzag    - zig-zag paths, geometric consistency, proper ordering
  fans      - zig-zag fans, extremal and external matchings
  algebra   - bounded-degree algebraic consistency and the CY3 complex
  polygen   - curve patterns and generated models
  render    - SVG diagrams
  cli       - command line front end
"""

from .surface import (DimerError, ParseError, TopologyError, TorusGraph,
                      Quiver, dualize, load, load_file, dump)

__all__ = ["DimerError", "ParseError", "TopologyError", "TorusGraph",
           "Quiver", "dualize", "load", "load_file", "dump"]

__version__ = "0.1.0"
