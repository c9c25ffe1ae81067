"""Static configuration shared by the library, the CLI and the test-suite."""

from dataclasses import dataclass

# Height bound for the conic search x^2 - a*y^2 = n*z^2.
CONIC_BOUND = 10**4

# Bound on y in the brute-force norm equation x^2 - m*y^2 = +-p.
NORM_BOUND = 10**5

# Largest prime scanned by the family generator.
PRIME_WINDOW = 10**5

# Seed for every pseudo-random choice (conjugator search, property tests).
SEED = 20240917

# m such that Z[sqrt(m)] is a principal ideal domain; the norm-equation
# solver is only guaranteed to succeed for these.
PID_WHITELIST = frozenset({2, 3, 5, 6, 7, 11, 13, 14, 19, 21, 22, 23, 29, 31})


@dataclass(frozen=True)
class Config:
    conic_bound: int = CONIC_BOUND
    norm_bound: int = NORM_BOUND
    prime_window: int = PRIME_WINDOW
    seed: int = SEED
    whitelist: frozenset = PID_WHITELIST


DEFAULT = Config()
