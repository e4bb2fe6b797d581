"""Worked examples and counter-examples used as regression fixtures.

Atoms ``phi``, ``psi`` and ``xi`` play the roles of the propositional
letters of the examples.
"""

from __future__ import annotations

from .possibilistic import PossibilisticBase

B = PossibilisticBase.of


def example1():
    """Idempotent fusion that still strengthens phi through complementarity."""
    b1 = B([("psi", 0.9), ("phi", 0.2)])
    b2 = B([("phi | ~psi", 0.8), ("phi", 0.2)])
    normalized = B([("psi", 0.45), ("phi | psi", 0.55), ("phi | ~psi", 0.5)])
    return b1, b2, normalized


def example2():
    """Product fusion where a reinforced formula is drowned by a higher Inc."""
    b1 = B([("phi | psi", 0.9), ("phi", 0.5), ("psi", 0.5), ("xi", 0.1)])
    b2 = B([("~phi | ~psi", 0.9), ("~phi", 0.5), ("~psi", 0.5), ("xi", 0.1)])
    # the four .55 items pair xi with each literal of phi and psi
    listed = [("phi | psi | xi", 0.91), ("~phi | ~psi | xi", 0.91),
              ("phi | ~psi", 0.75), ("~phi | psi", 0.75),
              ("phi | xi", 0.55), ("psi | xi", 0.55), ("~psi | xi", 0.55),
              ("~phi | xi", 0.55), ("xi", 0.19)]
    return b1, b2, listed


def example3():
    """Iterated classical extraction under min is not associative."""
    b1 = B([("phi", 0.8)])
    b2 = B([("~phi", 0.5), ("psi", 0.4)])
    b3 = B([("psi", 0.3)])
    return b1, b2, b3


# counter-examples ---------------------------------------------------------

def max_p2_p6():
    return B([("phi", 0.8)]), B([("psi", 0.3)])


def psum_arb(alpha: float = 0.5):
    return B([("phi", alpha)])


def min_p4():
    return B([("~phi", 0.6), ("psi", 0.5)]), B([("phi", 0.7)])


def min_p7():
    return B([("~phi", 0.6), ("psi", 0.5)]), B([("phi", 0.7), ("psi", 0.5)])


def prod_p4():
    # conflicting pair whose useful part is exactly the first base
    return B([("phi", 0.6)]), B([("~phi", 0.5)])


def prod_p5_arb():
    return B([("phi", 0.5)]), B([("psi", 0.6)])


def luk_maj():
    """Two confirming sources and a repeated opponent: Inc reaches 1."""
    return B([("phi", 0.8)]), B([("phi", 0.8)]), B([("~phi", 0.7)])


def idempotent_maj():
    """A repeated minority that an idempotent operator never lets win."""
    return B([("~phi", 0.7)]), B([("phi", 0.6)])


def strong_conflict(alpha: float = 0.4, beta: float = 0.6):
    return B([("phi", 1.0), ("psi", alpha)]), B([("~phi", 1.0), ("psi", beta)])


def amean_p6_weighted():
    """Averaging halves lone items, so (phi, .3) only survives at .15."""
    return B([("phi", 0.3)]), B([("~phi | psi", 0.6)])
