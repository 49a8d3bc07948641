from fractions import Fraction as F

import pytest

from wkam import make_instance


@pytest.fixture
def t2():
    """2-point instance with minimum cycle mean 1/2 on the 2-cycle."""
    return make_instance([[F(2), F(0)], [F(1), F(3)]], labels=["a", "b"])


@pytest.fixture
def t3():
    """3-point instance whose only zero-mean cycle is a <-> b; c is isolated."""
    return make_instance(
        [[F(1), F(0), F(9)], [F(0), F(9), F(9)], [F(9), F(9), F(9)]],
        labels=["a", "b", "c"],
    )


@pytest.fixture
def connector():
    """Two zero self-loops joined by a tight path through the middle point.

    The middle point lies on no zero cycle (it is not globally Aubry), yet
    the all-zero function calibrates a bi-infinite chain through it.
    """
    return make_instance(
        [[F(0), F(0), F(10)], [F(10), F(10), F(0)], [F(10), F(10), F(0)]],
        labels=["left", "mid", "right"],
    )
