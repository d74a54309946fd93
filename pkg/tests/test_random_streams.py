import numpy as np
import pytest

from random_streams import ShotRandomGenerator, StreamFactory

UNIFORM = [0.25, 0.25, 0.25, 0.25]


def _draw(stream):
    return tuple(stream.multinomial(10_000, UNIFORM))


def test_same_address_same_draws():
    a = StreamFactory(2024).stream(0, 0, 3, 7, 1)
    b = StreamFactory(2024).stream(0, 0, 3, 7, 1)
    assert np.array_equal(a.multinomial(1000, [0.5, 0.3, 0.2]), b.multinomial(1000, [0.5, 0.3, 0.2]))


def test_addresses_are_independent_of_order():
    factory = StreamFactory(11)
    forward = [_draw(factory.stream(0, 0, 1, t, 0)) for t in range(4)]
    backward = [_draw(factory.stream(0, 0, 1, t, 0)) for t in reversed(range(4))]
    assert forward == backward[::-1]


@pytest.mark.parametrize("other", [(1, 0, 3, 7, 1), (0, 1, 3, 7, 1), (0, 0, 4, 7, 1), (0, 0, 3, 8, 1),
                                   (0, 0, 3, 7, 0)])
def test_neighbouring_addresses_differ(other):
    base = _draw(StreamFactory(5).stream(0, 0, 3, 7, 1))
    assert base != _draw(StreamFactory(5).stream(*other))


def test_seeds_differ():
    assert _draw(StreamFactory(1).stream(0, 0, 1, 0, 0)) != _draw(StreamFactory(2).stream(0, 0, 1, 0, 0))


def test_round_off_probabilities_are_cleaned():
    rng = ShotRandomGenerator(3, (0,))
    counts = rng.multinomial(100, [0.6, 0.4 + 1e-12, -1e-13])
    assert counts.sum() == 100
    assert counts[2] == 0


def test_seed_required():
    with pytest.raises(ValueError):
        ShotRandomGenerator(None)
    with pytest.raises(ValueError):
        ShotRandomGenerator(-1)
