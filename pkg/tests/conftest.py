from pathlib import Path

import pytest

from preab.ratmat import Matrix
from preab.snake import SnakeInput
from preab.vectpair import VECTPAIR as V, full_object, make_morphism, make_object

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


def M(*rows):
    return Matrix([list(r) for r in rows])


def empty(nrows, ncols):
    return Matrix.zeros(nrows, ncols)


def snake_sign_input(beta=1) -> SnakeInput:
    """Diagram with A = C' = 0 and every other object Q with W = 0."""
    z = make_object(0)
    p = make_object(1)
    return SnakeInput(
        psi=make_morphism(z, p, empty(1, 0)),
        phi=make_morphism(p, p, M([1])),
        psi2=make_morphism(p, p, M([1])),
        phi2=make_morphism(p, z, empty(0, 1)),
        alpha=make_morphism(z, p, empty(1, 0)),
        beta=make_morphism(p, p, M([beta])),
        gamma=make_morphism(p, z, empty(0, 1)),
    )


@pytest.fixture
def fix_sn():
    return snake_sign_input()


@pytest.fixture
def fix_ns():
    return make_morphism(make_object(1), make_object(1, [[1]]), M([1]))


@pytest.fixture
def cat():
    return V


__all__ = ["M", "empty", "snake_sign_input", "full_object", "FIXTURES", "ROOT"]
