from src.solver.branches import branch_distance, normalize, representative, same_branch
from src.solver.newton import damped_newton
from src.solver.order import OrderReport, order_report, series_order, verify_order
from src.solver.search import SeedStrategy, half_pi_seeds, solve_phases, twin_seeds
from src.solver.template import SolveResult, SolveTemplate, objective

__all__ = [
    "SolveTemplate",
    "SolveResult",
    "SeedStrategy",
    "objective",
    "solve_phases",
    "verify_order",
    "order_report",
    "series_order",
    "OrderReport",
    "damped_newton",
    "half_pi_seeds",
    "twin_seeds",
    "branch_distance",
    "same_branch",
    "normalize",
    "representative",
]
