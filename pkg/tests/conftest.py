"""Shared fixtures.

The full-depth sieve takes tens of minutes; it is built once per session and
shared by every test that reads empirical statistics. Set GEOCORR_TEST_HCACHE
to a cache file path to reuse class numbers across sessions while iterating.
"""

import os

import pytest
from hypothesis import settings

settings.register_profile("ci", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("ci")

BIG_N = 1 << 16


@pytest.fixture(scope="session")
def big_sieve():
    from geocorr.cli import CacheEntry, read_cache, write_cache
    from geocorr.spectrum import spectrum_sieve

    cache = os.environ.get("GEOCORR_TEST_HCACHE")
    known = {}
    if cache and os.path.exists(cache):
        known = {d: e.h for d, e in read_cache(cache).items()}
    details = spectrum_sieve(BIG_N, known_h=known, return_details=True)
    if cache:
        entries = {
            d: CacheEntry(d, u, v, details.class_numbers[d])
            for d, (u, v) in details.first_trace.items()
        }
        write_cache(cache, entries)
    return details


@pytest.fixture(scope="session")
def big_rows(big_sieve):
    return big_sieve.rows
