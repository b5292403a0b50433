import numpy as np
import pytest
from hypothesis import given, strategies as st

from summax.rng import MASK64, RandomStream, mix64


def test_same_seed_same_bits():
    a, b = RandomStream(42), RandomStream(42)
    assert np.array_equal(a.uniforms(1000), b.uniforms(1000))


@pytest.mark.parametrize("other", [RandomStream(43), RandomStream(42, 1)])
def test_different_seed_or_stream_differs(other):
    assert not np.array_equal(RandomStream(42).uniforms(100), other.uniforms(100))


def test_take_advances_position():
    s = RandomStream(7)
    assert s.take(5) == 0
    assert s.take(3) == 5
    assert s.position == 8
    with pytest.raises(ValueError):
        s.take(-1)


def test_consecutive_calls_continue_the_sequence():
    s = RandomStream(3)
    joined = np.concatenate([s.uniforms(10), s.uniforms(15)])
    assert np.array_equal(joined, RandomStream(3).uniforms(25))


def test_split_does_not_advance_parent_and_is_deterministic():
    s = RandomStream(9)
    c1, c2 = s.split(0), s.split(1)
    assert s.position == 0
    assert c1.stream_id != c2.stream_id
    assert np.array_equal(c1.uniforms(50), RandomStream(9).split(0).uniforms(50))


def test_copy_is_independent_cursor():
    s = RandomStream(1)
    s.take(10)
    c = s.copy()
    assert np.array_equal(c.uniforms(5), s.uniforms(5))


@pytest.mark.parametrize("seed,stream_id", [(-1, 0), (0, -1), (MASK64 + 1, 0)])
def test_rejects_out_of_range(seed, stream_id):
    with pytest.raises(ValueError):
        RandomStream(seed, stream_id)


def test_uniforms_open_interval_and_moments():
    u = RandomStream(2024).uniforms(200_000)
    assert u.min() > 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 5 * np.sqrt(1 / 12 / u.size)
    assert abs(u.var() - 1 / 12) < 5e-3


def test_split_streams_uncorrelated():
    s = RandomStream(5)
    a, b = s.split(0).uniforms(100_000), s.split(1).uniforms(100_000)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.02


@given(st.integers(0, MASK64))
def test_mix64_stays_in_64_bits(z):
    assert 0 <= mix64(z) <= MASK64
