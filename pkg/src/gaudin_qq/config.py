"""Configuration constants for the qq-system solver."""

# Bethe and qq residuals below this are treated as solutions.
RESIDUAL_TOL = 1e-10

# Relative tolerance for deciding consistency of float linear systems.
LINEAR_TOL = 1e-9

# Numerical roots closer than this (times 1 + |root|) are one root.
ROOT_EQUALITY_TOL = 1e-7

# |⟨α_i, Z⟩| at or below this counts as resonant in float mode.
RESONANCE_TOL = 1e-12

# Newton refuses steps that bring a Bethe denominator closer than this to zero.
DENOMINATOR_GUARD = 1e-12

# Two Bethe configurations whose sorted roots agree to this are duplicates.
DEDUP_TOL = 1e-6

NEWTON_MAX_ITERATIONS = 200
NEWTON_MIN_DAMPING = 2.0**-20

# A Newton step is at most this many times 1 + |x| long.
NEWTON_STEP_CAP = 4.0

# Iterates beyond this multiple of the problem scale have escaped to infinity.
ESCAPE_FACTOR = 100.0

# Shift σ of the deflation operator Π (|x - r|⁻² + σ).
DEFLATION_SHIFT = 1.0

# Extra Newton sweeps with the solutions found so far deflated.
DEFLATION_ROUNDS = 3

DEFAULT_STARTS = 64
DEFAULT_SEED = 0
DEFAULT_WORKERS = 1

# Weyl groups larger than this are never enumerated.
DEFAULT_WEYL_CAP = 1024

# Largest denominator tried when turning numerical roots into rationals.
MAX_RATIONAL_DENOMINATOR = 10**6

# Float rational-function identities of degree d are checked at 2·d + this many random points.
SAMPLE_EXTRA_POINTS = 5

# Seed of the sample-point generator.
SAMPLE_SEED = 0

# Highest power of Π q₊ⁱ tried as a denominator when solving ℬ₋ tails in float mode.
TAIL_MAX_POLE_ORDER = 6
