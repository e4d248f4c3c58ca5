"""Distance from (alpha, gamma) to the region boundaries of the phase plane.

Used to exempt points that sit on a boundary when comparing classify with
the brute-force oracle. Each term is an upper bound on the true Euclidean
distance to that boundary piece, so the exemption is conservative.
"""
import math

from pdwtiling import quadcore

PI = math.pi


def _line_sum(s: float, n: int) -> float:
    # alpha + gamma = k pi or k pi +- pi/n (a root reaches x = +-1 there)
    best = math.inf
    for k in range(0, 5):
        for off in (0.0, PI / n, -PI / n):
            best = min(best, abs(s - (k * PI + off)) / math.sqrt(2.0))
    return best


def _dgn_gap(n: int, x: float, y: float) -> float:
    # vertical gap to gamma = dgn_n(alpha) is at least the true distance
    if not PI / 2 < x < PI:
        return math.inf
    return abs(y - quadcore.dgn(n, x))


def boundary_distance(n: int, alpha: float, gamma: float) -> float:
    d = min(abs(alpha - k * PI / 2) for k in range(5))
    d = min(d, min(abs(gamma - k * PI / 2) for k in range(5)))
    d = min(d, _line_sum(alpha + gamma, n))
    t = quadcore.tangency_alpha(n)
    d = min(d, abs(alpha - t), abs(gamma - t))
    d = min(d, _dgn_gap(n, alpha, gamma), _dgn_gap(n, gamma, alpha))
    return d
