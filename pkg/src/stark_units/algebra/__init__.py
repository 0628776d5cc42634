"""Exact arithmetic over F_q, A = F_q[theta] and polynomial rings over K."""

from .field import GF, FieldElem, get_field
from .grammar import format_poly, from_json, from_json_obj, parse_poly, to_json, to_json_obj
from .laurent import ApproxPoly, Laurent
from .multipoly import MultiPoly, PolyRing
from .theta import Frac, ThetaPoly, monic_enum
from .zseries import ZSeries

__all__ = [
    "GF", "FieldElem", "get_field",
    "format_poly", "from_json", "from_json_obj", "parse_poly", "to_json", "to_json_obj",
    "ApproxPoly", "Laurent", "MultiPoly", "PolyRing", "Frac", "ThetaPoly", "monic_enum", "ZSeries",
]
