# Fixed-step classical RK4 with event location by root-finding on the step map.
from scipy.optimize import brentq


def rk4_step(rhs, x, y, h):
    k1 = rhs(x, y)
    k2 = rhs(x + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(x + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(x + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def locate_event(rhs, x, y, h, g, xtol=1e-14):
    """Partial step length s in [0, h] where g(rk4_step(rhs, x, y, s)) crosses zero.

    The caller guarantees g changes sign between s = 0 and s = h.
    """
    g0 = g(y)
    if g0 == 0:
        return 0.0
    return brentq(lambda s: g(rk4_step(rhs, x, y, s)), 0.0, h, xtol=xtol * max(abs(h), 1e-300), rtol=1e-15)
