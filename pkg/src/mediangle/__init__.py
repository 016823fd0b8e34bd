"""Mediangle graphs and periagroups: recognition, hyperplanes, word problem and rotation systems."""
from .errors import *  # noqa: F401,F403
from .graph import (  # noqa: F401
    BallInfo, Graph, cliques, convex_even_cycles, distance, find_induced, gate, interval, is_convex, is_gated,
)
from .groups import GroupSpec  # noqa: F401
from .hyperplane import (  # noqa: F401
    Angle, angle, carrier, hyperplanes, sectors, separating_hyperplanes, transverse, verify_bighyp,
)
from .periagroup import (  # noqa: F401
    CayleyBall, Move, Presentation, Syllable, apply_move, canonical_form, cayley_ball, coset_min_rep,
    exchange_check, parabolic, parabolic_intersection, reduce, verify_semidirect, words_equal,
)
from .recognition import (  # noqa: F401
    Verdict, check_cycle_condition, check_even_cycle_intersections, check_triangle_condition, classify,
    is_median, is_mediangle, is_quasi_median,
)
from .rotation import (  # noqa: F401
    GroupAction, extract_periagroup, rotation_subgroup, verify_presystem, verify_rotation_system,
)

__version__ = "0.1.0"
