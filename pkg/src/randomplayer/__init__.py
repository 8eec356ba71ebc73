"""Random-player Maker-Breaker games: strategies, exact checkers and a Monte Carlo harness."""

__version__ = "0.1.0"
