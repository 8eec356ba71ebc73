from .boosters import boosters
from .bounds import TailBoundQuery, tail_bound
from .connectivity import k_connected
from .expansion import is_expander
from .graph import Graph
from .hamilton import is_hamiltonian
from .matching import hall_violator, has_perfect_matching
from .report import CheckReport, Verdict
from .structure import peel_min_degree, pseudo_t_sets

__all__ = ["Graph", "CheckReport", "Verdict", "is_hamiltonian", "has_perfect_matching",
           "hall_violator", "k_connected", "is_expander", "boosters", "peel_min_degree",
           "pseudo_t_sets", "TailBoundQuery", "tail_bound"]
