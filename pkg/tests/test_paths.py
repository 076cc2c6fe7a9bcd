import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from telegraph_max.paths import (ProcessParams, SamplePath, batch_conditional_times,
                                 batch_poisson_times, batch_position, batch_running_max,
                                 sample_path, sample_path_conditional)


@pytest.fixture
def two_event_path():
    return SamplePath(v0=1, horizon=1.0, events=[0.3, 0.5], c=1.0)


def test_params_validation():
    ProcessParams(1.0, 2.0)
    for lam, c in [(0.0, 1.0), (1.0, -1.0), (math.inf, 1.0), (math.nan, 1.0)]:
        with pytest.raises(ValueError):
            ProcessParams(lam, c)


def test_position_examples(two_event_path):
    p = two_event_path
    assert p.position(0.4) == pytest.approx(0.2, abs=1e-15)
    assert p.position(1.0) == pytest.approx(0.6, abs=1e-15)
    assert p.position(0.0) == 0.0


def test_position_continuous_at_events(two_event_path):
    p = two_event_path
    for s in p.events:
        assert p.position(s) == pytest.approx(p.position(np.nextafter(s, 2.0)), abs=1e-12)


def test_position_domain(two_event_path):
    with pytest.raises(ValueError):
        two_event_path.position(-0.01)
    with pytest.raises(ValueError):
        two_event_path.position(1.01)


def test_running_max_examples(two_event_path):
    assert two_event_path.running_max() == pytest.approx(0.6, abs=1e-15)
    # downward start that never climbs back above 0
    assert SamplePath(-1, 1.0, [0.4, 0.7]).running_max() == 0.0
    assert SamplePath(1, 3.0, [], c=2.0).running_max() == 6.0


def test_plus_time_examples(two_event_path):
    assert two_event_path.plus_time() == pytest.approx(0.8, abs=1e-15)
    assert SamplePath(-1, 2.5, []).plus_time() == 2.5


def test_path_validation():
    with pytest.raises(ValueError):
        SamplePath(0, 1.0, [])
    with pytest.raises(ValueError):
        SamplePath(1, 1.0, [0.5, 0.2])
    with pytest.raises(ValueError):
        SamplePath(1, 1.0, [0.0, 0.5])
    with pytest.raises(ValueError):
        SamplePath(1, 1.0, [0.5, 1.0])


def test_path_is_immutable(two_event_path):
    with pytest.raises(ValueError):
        two_event_path.events[0] = 0.1


def test_sampling_is_deterministic():
    params = ProcessParams(3.0, 1.5)
    a = [sample_path(params, 2.0, 1, np.random.default_rng(11)) for _ in range(3)]
    b = [sample_path(params, 2.0, 1, np.random.default_rng(11)) for _ in range(3)]
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x.events, y.events)
    t1, n1 = batch_poisson_times(np.random.default_rng(5), 1000, 2.0, 1.0)
    t2, n2 = batch_poisson_times(np.random.default_rng(5), 1000, 2.0, 1.0)
    np.testing.assert_array_equal(t1, t2)
    np.testing.assert_array_equal(n1, n2)


def test_single_path_sampler_counts_are_poisson():
    from scipy import stats
    params = ProcessParams(2.0, 1.0)
    rng = np.random.default_rng(2024)
    counts = np.array([sample_path(params, 1.0, 1, rng).n_events for _ in range(20_000)])
    top = 7
    observed = np.bincount(np.minimum(counts, top), minlength=top + 1)
    probs = stats.poisson.pmf(np.arange(top), 2.0)
    probs = np.append(probs, 1 - probs.sum())
    stat, p = stats.chisquare(observed, probs * counts.size)
    assert p > 0.001


def test_rare_events_zero_count_fraction():
    lam_t = 1e-4
    n = 1_000_000
    _, counts = batch_poisson_times(np.random.default_rng(99), n, lam_t, 1.0)
    p0 = math.exp(-lam_t)
    zero = np.mean(counts == 0)
    assert abs(zero - p0) <= 3 * math.sqrt(p0 * (1 - p0) / n)


def test_mean_event_count():
    _, counts = batch_poisson_times(np.random.default_rng(3), 1_000_000, 1.0, 1.0)
    assert abs(counts.mean() - 1.0) < 0.004


def test_batch_times_are_padded_and_sorted():
    times, counts = batch_poisson_times(np.random.default_rng(8), 5000, 30.0, 1.0)
    assert np.all(np.diff(times, axis=1) >= 0)
    assert np.all(times <= 1.0)
    assert np.all(np.sum(times < 1.0, axis=1) == counts)


def test_conditional_sampler():
    rng = np.random.default_rng(1)
    assert sample_path_conditional(0, 1.0, 1, rng).n_events == 0
    p = sample_path_conditional(6, 2.0, -1, rng, c=3.0)
    assert p.n_events == 6 and p.c == 3.0
    with pytest.raises(ValueError):
        sample_path_conditional(-1, 1.0, 1, rng)


def test_conditional_single_event_uniform_mean():
    times = batch_conditional_times(np.random.default_rng(4), 1_000_000, 1, 1.0)
    assert abs(times.mean() - 0.5) < 0.003


def test_plus_time_identity_on_random_paths():
    params = ProcessParams(4.0, 1.7)
    rng = np.random.default_rng(77)
    t = 1.3
    for _ in range(10_000):
        v0 = 1 if rng.random() < 0.5 else -1
        p = sample_path(params, t, v0, rng)
        assert abs(p.position(t) - v0 * p.c * (2 * p.plus_time() - t)) <= 1e-12 * t * p.c


def test_batch_helpers_match_single_paths():
    rng = np.random.default_rng(12)
    t, c = 2.0, 0.7
    times, counts = batch_poisson_times(rng, 500, 3.0, t)
    for v0 in (1, -1):
        mx = batch_running_max(times, v0, c, t)
        pos = batch_position(times, v0, c, t)
        for i in range(times.shape[0]):
            path = SamplePath(v0, t, times[i, :counts[i]], c)
            assert mx[i] == pytest.approx(max(path.running_max(), 0.0), abs=1e-12)
            assert pos[i] == pytest.approx(path.position(t), abs=1e-12)


event_lists = st.lists(st.floats(0.001, 0.999), max_size=12, unique=True).map(sorted)


@settings(max_examples=200, deadline=None)
@given(event_lists, st.sampled_from([1, -1]), st.floats(0.1, 5.0))
def test_path_invariants(events, v0, c):
    p = SamplePath(v0, 1.0, events, c)
    vertices = [p.position(s) for s in [0.0, *events, 1.0]]
    assert abs(p.position(1.0)) <= c * 1.0 + 1e-12
    assert p.running_max() >= max(vertices) - 1e-12
    if v0 == 1:
        assert p.running_max() > 0
    assert p.running_max() <= c + 1e-12
    for s in np.linspace(0, 1, 17):
        assert abs(p.position(s)) <= c * s + 1e-12
        assert p.position(s) <= p.running_max() + 1e-12
