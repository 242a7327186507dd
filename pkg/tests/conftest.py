import math

import numpy as np
import pytest

from cantorgap.geometry import OrientedSquare
from cantorgap.ifs import AffineMap, GeneralMap, IfsSpec
from cantorgap.specfile import grid_spec

UNIT = OrientedSquare(0j, math.sqrt(2.0))  # side 1, inscribed diameter 1


def corner_pair():
    """Two 2-map systems whose first-level squares sit in opposite corners."""
    K = IfsSpec(UNIT, [AffineMap(0.2, complex(-0.3, -0.3)), AffineMap(0.2, complex(0.3, 0.3))], 0.5)
    L = IfsSpec(UNIT, [AffineMap(0.2, complex(-0.3, 0.3)), AffineMap(0.2, complex(0.3, -0.3))], 0.5)
    return K, L


def quadratic_map(a, b, c, label="quad"):
    return GeneralMap(lambda z, a=a, b=b, c=c: a * z + c * z * z + b,
                      lambda z, a=a, c=c: a + 2 * c * z, label)


def random_general_spec(rng: np.random.Generator) -> IfsSpec:
    # r = 1/2: S' has radius sqrt(2); |2c| R < |a| keeps each map univalent on S'
    R = math.sqrt(2.0)
    maps = []
    for sx in (-1, 1):
        a = rng.uniform(0.05, 0.1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        c = (0.3 * abs(a) / (2 * R)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        b = complex(sx * 0.25, rng.uniform(-0.1, 0.1))
        maps.append(quadratic_map(complex(a), complex(b), complex(c)))
    return IfsSpec(UNIT, maps, 0.5)


@pytest.fixture(scope="session")
def grid4():
    return grid_spec(4, 0.99)


@pytest.fixture(scope="session")
def grid61():
    return grid_spec(61, 0.99)


@pytest.fixture(scope="session")
def report61(grid61):
    from cantorgap.invariants import thickness
    return thickness(grid61, depth=1)
