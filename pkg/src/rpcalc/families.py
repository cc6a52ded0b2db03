"""Benchmark formula families.

weak_pigeonhole(n) states that a relation viewed as a map from 2n-bit
pigeons to n-bit holes either collides on some hole or leaves some
pigeon unmapped; 2^{2n} pigeons cannot injectively fit into 2^n holes.
"""

from __future__ import annotations

from .formulas import (
    Atom,
    Formula,
    Not,
    Or,
    RApp,
    and_all,
    existss,
    foralls,
    iff,
    or_all,
)


def weak_pigeonhole(n: int) -> Formula:
    """ex p... ex q... ex r... [(p != q & R(p,r) & R(q,r)) | all s... ~R(p,s)]

    p and q range over 2n variables, r and s over n; every R application
    has arity 3n and the formula is sigma2-shaped.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    p = [f"p{i}" for i in range(1, 2 * n + 1)]
    q = [f"q{i}" for i in range(1, 2 * n + 1)]
    r = [f"r{i}" for i in range(1, n + 1)]
    s = [f"s{i}" for i in range(1, n + 1)]
    differ = or_all(Not(iff(Atom(a), Atom(b))) for a, b in zip(p, q))
    collide = and_all(
        [
            differ,
            RApp(tuple(Atom(v) for v in p + r)),
            RApp(tuple(Atom(v) for v in q + r)),
        ]
    )
    unmapped = foralls(s, Not(RApp(tuple(Atom(v) for v in p + s))))
    return existss(p + q + r, Or(collide, unmapped))


FAMILIES = {"wphp": weak_pigeonhole}
