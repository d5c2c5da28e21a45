import concurrent.futures

from series_builders import SeriesId
from series_builders import native_core
from series_cache import SeriesCache


def test_second_lookup_is_a_hit():
    cache = SeriesCache()
    calls = []

    def build():
        calls.append(1)
        return native_core(SeriesId.X, 2)[0]

    first = cache.get_or_build((SeriesId.X, 2), build)
    second = cache.get_or_build((SeriesId.X, 2), build)
    assert first is second
    assert len(calls) == 1
    assert (cache.hits, cache.misses) == (1, 1)


def test_least_recently_used_entry_is_evicted():
    cache = SeriesCache(max_size=2)
    cache.get_or_build("a", lambda: 1)
    cache.get_or_build("b", lambda: 2)
    cache.get_or_build("a", lambda: 1)
    cache.get_or_build("c", lambda: 3)
    assert set(cache.cache) == {"a", "c"}
    assert len(cache) == 2


def test_clear():
    cache = SeriesCache()
    cache.get_or_build("a", lambda: 1)
    cache.clear()
    assert len(cache) == 0
    assert cache.get_or_build("a", lambda: 2) == 2


def test_concurrent_lookups_share_one_value():
    cache = SeriesCache()
    with concurrent.futures.ThreadPoolExecutor(max_workers=4) as executor:
        futures = [
            executor.submit(cache.get_or_build, "P", lambda: native_core(SeriesId.P, 2)[0])
            for _ in range(8)
        ]
        values = [f.result() for f in futures]
    assert all(v == values[0] for v in values)
    assert len(cache) == 1
