"""
pinskerlab: sharp Pinsker-type bounds for Tsallis losses.

Closed-form strong-convexity constants of negative Tsallis entropies on the
probability simplex, the matching extremal witnesses, and a randomized
harness that checks the whole chain numerically.
"""

__version__ = "0.1.0"
__author__ = "pinskerlab Team"
