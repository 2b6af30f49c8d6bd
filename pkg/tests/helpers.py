import math

from qsplit.states import StateFamily

PI = math.pi


def random_family(rng, n):
    return StateFamily.from_angles(rng.uniform(0.0, PI, n), rng.uniform(0.0, 2 * PI, n))


def family(thetas, phis):
    return StateFamily.from_angles(thetas, phis)


def random_complex(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)
