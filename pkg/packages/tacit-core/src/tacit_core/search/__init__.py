from .cmaes import CmaesSearch
from .grid import GridSearch

__all__ = ["CmaesSearch", "GridSearch"]
