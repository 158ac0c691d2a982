"""Ordered graded diagrams, their successor dynamics, and their ordered groups.

Everything is exact: arbitrary-precision integers for matrices and heights,
rational intervals for the one place a limit shows up (the dominant
eigenvector pairing).  All values are immutable after construction and all
operations are pure functions of their inputs.
"""

from .diagram import (
    BratteliDiagram,
    Edge,
    OrderedDiagram,
    Primitivity,
    Simplicity,
    VertexId,
    Violation,
    canonical_key,
    compose_schedules,
    graded_isomorphic,
    incidence_matrix,
    induced_order_telescope,
    is_primitive,
    max_min_edges,
    order_isomorphic,
    telescope,
    validate,
    verify_interleaving_witness,
)
from .dimension import (
    GroupElement,
    GroupPresentation,
    Sign,
    TowerFunction,
    coboundary_witness,
    equal,
    gamma,
    gamma_intertwine_check,
    interpolate,
    is_positive,
    k0_of,
    lift_tower_function,
    push,
    unit_of,
)
from .equivalence import (
    FiniteChange,
    UnitChangeReport,
    apply_finite_change,
    change_stationary_top,
    first_return_check,
    induce_on_top,
    unit_change_report,
)
from .serialize import (
    ParseError,
    export_dot,
    format_element,
    parse_diagram,
    parse_element,
    parse_finite_change,
    parse_kr,
    parse_substitution,
    serialize_diagram,
    serialize_kr,
    serialize_substitution,
)
from .stationary import (
    DegenerateDiagramError,
    NotProperlyOrderedError,
    ProperOrdering,
    StationaryOrderedDiagram,
    Substitution,
    count_extreme_paths,
    diagram_of_substitution,
    is_simple,
    properly_ordered,
    substitution_of,
    symbol_split,
)
from .towers import (
    KRLevel,
    NestedKRSequence,
    diagram_from_nested,
    locate,
    locate_prefix,
    nested_from_diagram,
    roundtrip_check,
)
from .vershik import (
    AdicPath,
    OrbitStream,
    PathPrefix,
    Tower,
    extreme_paths,
    is_cofinal,
    max_prefix,
    min_prefix,
    minimal_path,
    orbit_sequence,
    paths_equal,
    predecessor_in_tower,
    successor_in_tower,
    tower,
    vershik_predecessor,
    vershik_step,
)

__all__ = [name for name in dir() if not name.startswith("_")]
