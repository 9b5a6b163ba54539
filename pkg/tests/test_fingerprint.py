import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urncount.fingerprint import (
    Fingerprint,
    fingerprint,
    fingerprint_from_count_values,
    histogram,
    histogram_from_counts,
    parse_fingerprint,
    serialize_fingerprint,
)
from urncount.sampling import SampleBatch


def batch_of(draws):
    return SampleBatch(tuple(draws), len(draws), "multinomial")


class TestHistogram:
    def test_empty(self):
        assert histogram(batch_of([])).counts == {}

    def test_direct_count(self):
        h = histogram(batch_of([5, 7, 5, 9, 7, 5]))
        assert h.counts == {5: 3, 7: 2, 9: 1}

    def test_single_draw(self):
        assert histogram(batch_of([4])).counts == {4: 1}

    def test_from_counts_drops_zeros(self):
        assert histogram_from_counts({1: 2, 2: 0}).counts == {1: 2}
        with pytest.raises(ValueError):
            histogram_from_counts({1: -1})


class TestFingerprint:
    def test_direct(self):
        fp = fingerprint(histogram(batch_of([5, 7, 5, 9, 7, 5])))
        assert fp.phi == {1: 1, 2: 1, 3: 1}
        assert fp.c_seen == 3

    def test_empty(self):
        fp = fingerprint(histogram(batch_of([])))
        assert fp.phi == {} and fp.c_seen == 0

    def test_all_doubles(self):
        fp = fingerprint(histogram(batch_of([1, 1, 2, 2, 3, 3])))
        assert fp.phi == {2: 3} and fp.c_seen == 3

    def test_dense_view(self):
        fp = Fingerprint({1: 4, 3: 1}, 5)
        assert fp.dense(4) == [4, 0, 1, 0]

    def test_from_count_values(self):
        fp = fingerprint_from_count_values([0, 2, 1, 0, 2])
        assert fp.phi == {2: 2, 1: 1} and fp.c_seen == 3

    @given(st.lists(st.integers(0, 30), max_size=200))
    @settings(max_examples=200, deadline=None)
    def test_mass_and_count_identities(self, draws):
        fp = fingerprint(histogram(batch_of(draws)))
        assert sum(j * cnt for j, cnt in fp.phi.items()) == len(draws)
        assert sum(fp.phi.values()) == fp.c_seen

    @given(st.lists(st.integers(0, 30), max_size=200), st.integers(0, 2**32))
    @settings(max_examples=200, deadline=None)
    def test_label_invariance(self, draws, salt):
        relabeled = [(d * 2654435761 + salt) % (2**64) for d in draws]
        if len(set(relabeled)) != len(set(draws)):
            return  # hash collision: not an injective relabeling
        a = fingerprint(histogram(batch_of(draws)))
        b = fingerprint(histogram(batch_of(relabeled)))
        assert a == b


class TestIdentitiesAcrossSamplers:
    def test_identities_hold_for_every_sampler(self):
        # 1000 random (urn, sampler) batches: mass and count identities
        from urncount.rng import RngStream
        from urncount.sampling import (
            draw_bernoulli,
            draw_poissonized,
            draw_with_replacement,
            draw_without_replacement,
        )
        from urncount.urn import make_uniform_support

        meta = RngStream(2024, 0)
        for trial in range(250):
            k = 1 + meta.randbelow(60)
            C = 1 + meta.randbelow(k)
            urn = make_uniform_support(k, C)
            n = meta.randbelow(k + 1)
            rng = RngStream(2025, trial)
            batches = [
                draw_with_replacement(urn, n, rng),
                draw_without_replacement(urn, n, rng),
                draw_bernoulli(urn, (meta.randbelow(11)) / 10, rng),
                draw_poissonized(urn, n, rng),
            ]
            for batch in batches:
                fp = fingerprint(histogram(batch))
                assert sum(j * c for j, c in fp.phi.items()) == batch.realized_size
                assert sum(fp.phi.values()) == fp.c_seen
                assert fp.c_seen <= urn.C


class TestFingerprintFiles:
    def test_roundtrip(self):
        fp = Fingerprint({1: 3, 4: 2}, 5)
        assert parse_fingerprint(serialize_fingerprint(fp)) == fp

    def test_parse_validation(self):
        with pytest.raises(ValueError, match="j count"):
            parse_fingerprint("1 2 3")
        with pytest.raises(ValueError, match=">= 1"):
            parse_fingerprint("0 5")
        with pytest.raises(ValueError, match="duplicate"):
            parse_fingerprint("1 2\n1 3")
