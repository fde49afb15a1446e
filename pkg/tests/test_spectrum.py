"""Trace decompositions, the multiplicity sieve, and smoothed density tables."""

import math

import pytest

from geocorr.errors import ResourceLimitError
from geocorr.quadforms import class_number, smoothed_L
from geocorr.spectrum import (
    beta,
    beta_table,
    spectrum_sieve,
    trace_decompositions,
)


def test_decompositions_enumerate_discriminant_cofactors():
    assert [(e.d, e.v) for e in trace_decompositions(3).entries] == [(5, 1)]
    assert [(e.d, e.v) for e in trace_decompositions(4).entries] == [(12, 1)]
    assert [(e.d, e.v) for e in trace_decompositions(6).entries] == [(32, 1), (8, 2)]
    assert [(e.d, e.v) for e in trace_decompositions(7).entries] == [(45, 1), (5, 3)]
    # 15 = 3 mod 4 is not a discriminant, so v=2 is skipped at n=8
    assert [(e.d, e.v) for e in trace_decompositions(8).entries] == [(60, 1)]


def test_decompositions_reject_traces_at_most_two():
    for bad in (2, 1, 0, -3):
        with pytest.raises(ValueError):
            trace_decompositions(bad)
    with pytest.raises(TypeError):
        trace_decompositions(True)


def test_sieve_rows_match_class_number_sums():
    rows = spectrum_sieve(40)
    assert [r.n for r in rows] == list(range(3, 41))
    pinned_g = {3: 1, 4: 2, 5: 2, 6: 3, 7: 2, 8: 4, 9: 2}
    for row in rows:
        if row.n in pinned_g:
            assert row.g == pinned_g[row.n], row.n
        assert row.alpha == pytest.approx(row.g * math.log(row.n) / row.n, rel=1e-15)
        assert row.alpha_tilde == row.alpha - 1.0


def test_sieve_g_equals_full_fundamental_recount():
    """Recount g(n) from scratch: sum h(d) over first occurrences of d."""
    N = 200
    details = spectrum_sieve(N, return_details=True)
    seen = set()
    for dec in details.decompositions:
        g = 0
        for e in dec.entries:
            if e.d not in seen:
                seen.add(e.d)
                assert e.fundamental
                g += class_number(e.d)
            else:
                assert not e.fundamental
        assert details.rows[dec.n - 3].g == g, dec.n


def test_sieve_first_trace_details():
    details = spectrum_sieve(10, return_details=True)
    assert details.first_trace[5] == (3, 1)
    assert details.first_trace[32] == (6, 1)
    assert details.first_trace[8] == (6, 2)
    assert details.class_numbers[12] == 2


def test_sieve_seeding_is_used_and_validated():
    seeded = spectrum_sieve(6, known_h={5: 7})
    assert seeded[0].g == 7
    with pytest.raises(ValueError):
        spectrum_sieve(6, known_h={5: 0})
    with pytest.raises(ValueError):
        spectrum_sieve(6, known_h={5: "1"})


def test_sieve_engines_agree():
    pure = spectrum_sieve(300, h_engine="pure")
    bulk = spectrum_sieve(300, h_engine="bulk")
    assert pure == bulk
    with pytest.raises(ValueError):
        spectrum_sieve(10, h_engine="nonsense")


def test_sieve_memory_budget():
    with pytest.raises(ResourceLimitError):
        spectrum_sieve(10**6, memory_budget=10**6)


def test_sieve_is_deterministic():
    assert spectrum_sieve(400) == spectrum_sieve(400)


def test_beta_spot_values():
    assert beta(3, 4096.0) == pytest.approx(smoothed_L(5, 4096.0), abs=1e-14)
    assert beta(6, 1024.0) == pytest.approx(
        smoothed_L(32, 1024.0) + smoothed_L(8, 1024.0) / 2, abs=1e-14
    )


def test_beta_table_matches_pointwise_beta():
    table = beta_table(60, 512.0)
    for i, n in enumerate(range(3, 61)):
        assert table[i] == pytest.approx(beta(n, 512.0), abs=1e-12)


def test_density_tracks_alpha_in_dyadic_blocks(big_rows):
    """Block-mean |alpha - beta| shrinks as n grows (10% slack per step)."""
    top = 1 << 14
    smoothing = float(1 << 13)
    table = beta_table(top, smoothing)
    alpha = {row.n: row.alpha for row in big_rows}
    means = []
    lo = 4
    while lo < top:
        block = range(lo + 1, 2 * lo + 1)
        means.append(
            sum(abs(alpha[n] - table[n - 3]) for n in block) / len(block)
        )
        lo *= 2
    for prev, cur in zip(means, means[1:]):
        assert cur <= 1.10 * prev, means
