"""Latin squares with prescribed subsquares, subsquare counting, and full-product loops."""
from .census import (
    block_decomposition,
    enumerate_subsquares,
    exponent_check,
    psi,
    subsquare_upper_bound,
)
from .construct import (
    build_disjoint_share_rows,
    build_overlapping,
    build_share_all_rows,
    build_two_subsquares,
    existence_verdict,
    overlap_conditions,
    two_subsquares_exist,
)
from .core import (
    LatinSquare,
    PartialArray,
    SubsquareHandle,
    extract_subsquare,
    format_square,
    parse_partial,
    parse_square,
    validate,
)
from .errors import LatinError
from .loops import Loop, build_full_loop, full_products, is_full, verify_certificate
from .ryser import complete_partial, complete_to_square, ryser_check

__version__ = "0.1.0"
