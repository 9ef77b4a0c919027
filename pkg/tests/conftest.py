import json

import pytest

from gradmult.monomial_core import AmbientRing, maximal_ideal, normalize


@pytest.fixture
def ring2():
    return AmbientRing(("x", "y"))


@pytest.fixture
def ring3():
    return AmbientRing(("x", "y", "z"))


@pytest.fixture
def m2(ring2):
    return maximal_ideal(ring2)


@pytest.fixture
def ideal():
    """ideal(ring, (2, 0), (0, 3)) -> (x^2, y^3)"""
    def build(ring, *points):
        return normalize(ring, points)
    return build


@pytest.fixture
def write_json(tmp_path):
    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)
    return write
