"""Cyclic set and fat graph cocycles, evaluated exactly.

Modules: :mod:`cyclic` (the category of cyclic sets and its cocycles),
:mod:`fatgraph` (ribbon graphs and collapses), :mod:`associahedron`
(non-crossing chord sets), :mod:`witten` (the enumerated constants),
:mod:`quadrature` (numerical integrals) and :mod:`cli`.
"""

__version__ = "0.1.0"
