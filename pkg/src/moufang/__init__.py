"""Finite Moufang loop kernel and classification engine.

Cayley-table loops with exhaustive law checking, Chein doubling, the
cyclic and dihedral quarter-table modifications, an invariant-pruned
isomorphism engine, and the modification-closure search that reproduces
the classification of nonassociative Moufang loops of order below 64.
"""

from .constructions import (
    CyclicParams,
    DihedralParams,
    SigmaWindow,
    chein_double,
    cyclic_modify,
    dihedral_modify,
    enumerate_modifications,
)
from .groups import builtin_group, nonabelian_groups
from .iso import IsoCatalog, are_isomorphic, discriminator, element_invariant
from .search import (
    Catalog,
    CatalogEntry,
    Recipe,
    SeedDescriptor,
    bootstrap_groups,
    class_report,
    explore,
    replay,
    search_orders,
)
from .subloop import (
    NormalDecomposition,
    QuotientShape,
    SubloopHandle,
    associator_subloop,
    classify_quotient,
    identify_small_group,
    is_normal,
    normal_subloops_for_search,
    quotient,
    subloop_closure,
)
from .table import (
    Law,
    LoopError,
    LoopTable,
    OrderStatistic,
    direct_product,
    table_distance,
)

__all__ = [
    "Catalog",
    "CatalogEntry",
    "CyclicParams",
    "DihedralParams",
    "IsoCatalog",
    "Law",
    "LoopError",
    "LoopTable",
    "NormalDecomposition",
    "OrderStatistic",
    "QuotientShape",
    "Recipe",
    "SeedDescriptor",
    "SigmaWindow",
    "SubloopHandle",
    "are_isomorphic",
    "associator_subloop",
    "bootstrap_groups",
    "builtin_group",
    "chein_double",
    "class_report",
    "classify_quotient",
    "cyclic_modify",
    "dihedral_modify",
    "direct_product",
    "discriminator",
    "element_invariant",
    "enumerate_modifications",
    "explore",
    "identify_small_group",
    "is_normal",
    "nonabelian_groups",
    "normal_subloops_for_search",
    "quotient",
    "replay",
    "search_orders",
    "subloop_closure",
    "table_distance",
]

__version__ = "0.1.0"
