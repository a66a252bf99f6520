"""Scale caps for the exhaustive routines.

These are plain module attributes so callers and tests can override them,
e.g. ``permrd.config.ENUMERATION_CAP = 11``.
"""

# enumerate_permutations refuses n above this
ENUMERATION_CAP = 10
# ball_brute_force
BALL_ORACLE_CAP = 8
# covering_radius / average_distortion / greedy_cover on generic codes
COVER_ORACLE_CAP = 9
# minimal_cover_exact
MINIMAL_COVER_CAP = 5
# band DP is used while the window 2r+1 fits in this many bits
BAND_DP_MAX_BITS = 25
# Ryser fallback; pure-Python Gray-code Ryser at n=24 takes roughly a minute
RYSER_MAX_N = 24
# construction_codewords(materialize=True) refuses codes larger than this
MATERIALIZE_CAP = 10**7
