"""Shared instances for the test suite.

Two small "desk" instances exercise every layer:

* f64: Hermitian x^3 = y^2 + y over F_4, n = 8, beta = 2, tower F_64/F_4
  (l = 3), two x-fiber parts {0,1} and {alpha, alpha^2}, m = 2.
* f81: Hermitian x^4 = y^3 + y over F_9, n = 27, beta = 6, tower F_81/F_9
  (l = 2), one x-fiber part {0,1,2}, m = 1.

The interleaved tests additionally bump the f81 curve to l = 3, m = 2
(tower F_729/F_9) so that there are two rows to decode collaboratively.
"""

import pytest

from agfrac import (CurveModel, EvalCode, ExtensionTower, FractionalSpec,
                    parse_field_spec)


class Desk:
    def __init__(self, q0, l, beta, z, value_parts):
        self.curve = CurveModel.hermitian(q0)
        self.base = self.curve.field
        self.tower = ExtensionTower(self.base, l)
        self.ext = self.tower.ext
        self.points = self.curve.affine_points()
        self.code = EvalCode(self.curve, self.ext, self.points, beta)
        self.spec = FractionalSpec(self.tower, self.code, z, value_parts)


@pytest.fixture(scope="session")
def f64():
    return Desk(q0=2, l=3, beta=2, z="x", value_parts=[[0, 1], [2, 3]])


@pytest.fixture(scope="session")
def f81():
    return Desk(q0=3, l=2, beta=6, z="x", value_parts=[[0, 1, 2]])


@pytest.fixture(scope="session")
def f729():
    return Desk(q0=3, l=3, beta=6, z="x", value_parts=[[0, 1], [2]])


@pytest.fixture(scope="session")
def f2():
    return parse_field_spec("2")


@pytest.fixture(scope="session")
def f4():
    return parse_field_spec("2^2")


@pytest.fixture(scope="session")
def f9():
    return parse_field_spec("3^2")
