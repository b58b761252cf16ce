import json
from random import Random

import pytest

from app.models.classical import CartanMatrix
from app.models.scalar import ONE
from app.models.tensor import BraidingMatrix
from app.services.braid_service import random_braiding
from app.services.specialization_service import braiding_from_cartan

EXAMPLE_CARTAN = [[2, -2, -1], [-1, 2, -1], [-3, -1, 2]]
A2_CARTAN = [[2, -1], [-1, 2]]
B2_CARTAN = [[2, -2], [-1, 2]]

# block (1,0,3) pre-relation of the non-symmetrizable example
EXAMPLE_P4 = (
    "F3^3*F1 - (q^-3 + q^-1 + q)*F3^2*F1*F3"
    " + (q^-4 + q^-2 + 1)*F3*F1*F3^2 - q^-3*F1*F3^3"
)


@pytest.fixture
def example_cartan():
    return CartanMatrix.from_rows(EXAMPLE_CARTAN)


@pytest.fixture
def example_braiding(example_cartan):
    return braiding_from_cartan(example_cartan)


@pytest.fixture
def a2_cartan():
    return CartanMatrix.from_rows(A2_CARTAN)


@pytest.fixture
def a2_braiding(a2_cartan):
    return braiding_from_cartan(a2_cartan)


@pytest.fixture
def b2_cartan():
    return CartanMatrix.from_rows(B2_CARTAN)


@pytest.fixture
def b2_braiding(b2_cartan):
    return braiding_from_cartan(b2_cartan)


@pytest.fixture
def minus_one_braiding():
    return BraidingMatrix(((-ONE, -ONE), (-ONE, -ONE)))


@pytest.fixture
def random_braidings():
    rng = Random(7)
    return [
        random_braiding(2, rng, 4, unit_pairs=True),
        random_braiding(2, rng, 4, symmetric=True),
        random_braiding(2, rng, 4),
    ]


@pytest.fixture
def matrix_file(tmp_path):
    def write(content, name="matrix.json"):
        path = tmp_path / name
        path.write_text(content if isinstance(content, str) else json.dumps(content))
        return str(path)
    return write
