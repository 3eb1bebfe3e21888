"""Independent univariate oracles for small ED and linear-critical counts.

Each oracle writes the critical condition of a curve as one polynomial in a
single parameter with sympy, then counts its distinct roots away from the
excluded points.  Nothing here touches the package's Groebner engine.
"""

import random

import sympy

t = sympy.symbols("t")


def distinct_roots(expr, exclude=()):
    """Number of distinct complex roots of a univariate polynomial, off ``exclude``."""
    p = sympy.Poly(sympy.expand(expr), t)
    sqfree = sympy.quo(p, sympy.gcd(p, p.diff(t)))
    for e in exclude:
        while sqfree.eval(e) == 0:
            sqfree = sympy.quo(sqfree, sympy.Poly(t - e, t))
    return sqfree.degree()


def _data(seed, k):
    rng = random.Random(seed)
    return [sympy.Rational(rng.randint(-10 ** 4, 10 ** 4), rng.randint(1, 97)) for _ in range(k)]


def parabola_ed(seed=0):
    a, b = _data(seed, 2)
    return distinct_roots((t - a) + 2 * t * (t ** 2 - b))


def twisted_cubic_ed(seed=0):
    a, b, c = _data(seed, 3)
    return distinct_roots((t - a) + 2 * t * (t ** 2 - b) + 3 * t ** 2 * (t ** 3 - c))


def circle_ed(seed=0):
    # the minor z2 (z1 - a) - z1 (z2 - b) = 0 forces z2 = (b/a) z1
    a, b = _data(seed, 2)
    return distinct_roots(t ** 2 * (1 + (b / a) ** 2) - 1)


def ellipse_ed(seed=0):
    # (x, y) = ((1 - t^2)/(1 + t^2), t/(1 + t^2)); numerator of d/dt of the distance
    a, b = _data(seed, 2)
    x = (1 - t ** 2) / (1 + t ** 2)
    y = t / (1 + t ** 2)
    num = sympy.numer(sympy.together(sympy.diff((x - a) ** 2 + (y - b) ** 2, t)))
    return distinct_roots(num, exclude=(sympy.I, -sympy.I))


def cubic_ed(seed=0):
    # x (x + 1) y = 1 as (t, 1/(t^2 + t)); cleared by (t^2 + t)^3
    a, b = _data(seed, 2)
    s = t ** 2 + t
    return distinct_roots((t - a) * s ** 3 - (1 - b * s) * (2 * t + 1), exclude=(0, -1))


def cubic_linear(seed=0):
    # l = alpha x + beta / (x (x + 1)); critical where alpha s^2 = beta (2t + 1)
    alpha, beta = _data(seed, 2)
    s = t ** 2 + t
    return distinct_roots(alpha * s ** 2 - beta * (2 * t + 1), exclude=(0, -1))
