"""rootgrade: exact gradings of split exceptional Lie algebras.

Builds the split forms G2, F4, E6, E7, E8 (and some classical companions)
with exact cyclotomic structure constants, equips them with their fine and
Cartan gradings, and runs the root-system coarsening pipeline: universal
groups, weight geometry, root-system classification, isotypic bookkeeping,
and recovery of coordinate algebras from short root spaces.
"""
from __future__ import annotations

__version__ = "0.1.0"
