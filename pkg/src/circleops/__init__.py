"""Circled planar trees, the complete graph operad, and the finite categories they generate."""

from .cattop import (
    AcyclicityReport,
    CategoryError,
    FinCategory,
    FinFunctor,
    acyclicity_report,
    build_comma,
    build_hat_comma,
    comma_below,
    deletion_functor,
    fiber_adjoint_report,
    grothendieck,
    hat_comma_grothendieck,
    hat_comma_isomorphism,
    nerve,
    nerve_homology,
    poset_category,
)
from .circled import (
    BLACK,
    Black,
    Circ,
    White,
    enumerate_configs,
    open_leaves,
    parse_config,
    random_config,
    underlying,
    validate_config,
)
from .homology import ChainComplex, HomologyResult, homology
from .kgraph import (
    KElt,
    k_compose,
    k_enumerate,
    k_iota,
    k_leq,
    kelt_text,
    parse_kelt,
)
from .operad_h import (
    HatOperation,
    HOperation,
    complexity,
    compose,
    hat_compose,
    identity_op,
    operations,
    sigma_act,
)
from .render import LayoutOptions, clearance_violations, layout_config, render_svg
from .trees import LEAF, Leaf, Node, ParseError, corolla, enumerate_trees, parse_tree

__version__ = "0.1.0"

__all__ = [
    "AcyclicityReport",
    "BLACK",
    "Black",
    "CategoryError",
    "ChainComplex",
    "Circ",
    "FinCategory",
    "FinFunctor",
    "HatOperation",
    "HOperation",
    "HomologyResult",
    "KElt",
    "LEAF",
    "LayoutOptions",
    "Leaf",
    "Node",
    "ParseError",
    "White",
    "acyclicity_report",
    "build_comma",
    "build_hat_comma",
    "clearance_violations",
    "comma_below",
    "complexity",
    "compose",
    "corolla",
    "deletion_functor",
    "enumerate_configs",
    "enumerate_trees",
    "fiber_adjoint_report",
    "grothendieck",
    "hat_comma_grothendieck",
    "hat_comma_isomorphism",
    "hat_compose",
    "homology",
    "identity_op",
    "k_compose",
    "k_enumerate",
    "k_iota",
    "k_leq",
    "kelt_text",
    "layout_config",
    "nerve",
    "nerve_homology",
    "open_leaves",
    "operations",
    "parse_config",
    "parse_kelt",
    "parse_tree",
    "poset_category",
    "random_config",
    "render_svg",
    "sigma_act",
    "underlying",
    "validate_config",
    "__version__",
]
