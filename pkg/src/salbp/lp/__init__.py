from salbp.lp.analysis import decode_optimum, lp_bound, lp_deviation, triangular
from salbp.lp.bnb import MipResult, MipStatus, solve_bnb
from salbp.lp.export import export_lp_text, export_mps, mps_name_map
from salbp.lp.simplex import LpSolution, Status, Tableau, solve_lp

__all__ = [
    "LpSolution",
    "MipResult",
    "MipStatus",
    "Status",
    "Tableau",
    "decode_optimum",
    "export_lp_text",
    "export_mps",
    "lp_bound",
    "lp_deviation",
    "mps_name_map",
    "solve_bnb",
    "solve_lp",
    "triangular",
]
