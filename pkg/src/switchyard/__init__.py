"""Coordinate systems on combinatorial train tracks over abelian coefficient groups.

Subpackages cover the coefficient-group arithmetic and index bookkeeping
(`algebra`), trivalent track neighborhoods with maximal trees and orientation
covers (`traintrack`), chain-level bookkeeping on the double cover
(`homology`), the finite coordinate form of cocyclic pairs together with the
torsion invariant and its explicit inverse (`cocyclic`), flag bases and
unipotent normal forms (`flags`), symbolic boundary-product ledgers
(`slither`), and lifting obstructions for projective representations
(`obstruction`).
"""

__version__ = "0.1.0"
