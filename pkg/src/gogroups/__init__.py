"""gogroups: computational graphs of groups.

Graphs of groups over concrete computable backends (finite, finitely
generated abelian, free), morphisms and immersions with twisting elements,
lazily expanded pullbacks computing subgroup intersections, coset
interaction diagnostics, and deciders for the finitely generated
intersection property on graphs of (virtually) Z groups and graphs of free
groups with cyclic edge groups.
"""

__version__ = "0.1.0"
