from .base import Claim, Done, Forfeit
from .ham import SHam
from .isolation import Isolation, RandomBreaker, attempt_success_probability_bound
from .kconn import SK
from .matching import SPM, embed_halves

__all__ = ["Claim", "Done", "Forfeit", "SHam", "SPM", "SK", "Isolation", "RandomBreaker",
           "attempt_success_probability_bound", "embed_halves"]
