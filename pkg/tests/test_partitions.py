import pytest

from semiqueens.errors import LimitExceeded
from semiqueens.partitions import SetPartition, all_set_partitions, bell_number, killing_partitions


def test_bell_numbers():
    assert [bell_number(m) for m in range(8)] == [1, 1, 2, 5, 15, 52, 203, 877]


def test_all_partitions_count_matches_bell():
    for m in range(7):
        assert sum(1 for _ in all_set_partitions(m)) == bell_number(m)


def test_mobius_weights():
    singletons = SetPartition.from_blocks(4, [[0], [1], [2], [3]])
    assert singletons.mobius() == 1
    pair = SetPartition.from_blocks(2, [[0, 1]])
    assert pair.mobius() == -1
    block4 = SetPartition.from_blocks(4, [[0, 1, 2, 3]])
    assert block4.mobius() == -6


def test_partition_validation():
    with pytest.raises(ValueError):
        SetPartition.from_blocks(3, [[0, 1]])  # does not cover
    with pytest.raises(ValueError):
        SetPartition.from_blocks(2, [[0, 1], [1]])  # overlap


class TestKillingPartitions:
    def test_opposite_pair_has_unique_killer(self):
        n = 7
        found = list(killing_partitions((2, 5), n))
        assert len(found) == 1
        assert found[0].blocks == ((0, 1),)

    def test_equal_pair_has_none(self):
        assert list(killing_partitions((2, 2), 7)) == []

    def test_generic_two_pairs(self):
        # (r, -r, s, -s) generic: the pairing and the whole set kill, nothing else.
        # Exhaustively verified against the Bell(4) = 15 partitions below.
        n = 11
        values = (1, 10, 3, 8)
        found = {p.blocks for p in killing_partitions(values, n)}
        brute = {
            p.blocks
            for p in all_set_partitions(4)
            if all(sum(values[i] for i in block) % n == 0 for block in p.blocks)
        }
        assert found == brute
        assert found == {((0, 1), (2, 3)), ((0, 1, 2, 3),)}

    def test_s_equals_minus_r_grows_pairings(self):
        n = 11
        values = (1, 10, 10, 1)  # r, -r, s=-r, -s=r
        pairings = {
            p.blocks for p in killing_partitions(values, n) if all(len(b) == 2 for b in p.blocks)
        }
        assert pairings == {((0, 1), (2, 3)), ((0, 2), (1, 3))}

    def test_no_killers_without_total_zero_sum(self):
        assert list(killing_partitions((1, 2, 3), 9)) == []

    def test_singletons_only_on_zero_values(self):
        found = {p.blocks for p in killing_partitions((0, 3, 4), 7)}
        assert found == {((0,), (1, 2)), ((0, 1, 2),)}
        assert all(b != (1,) and b != (2,) for p in found for b in p)

    def test_size_guard(self):
        with pytest.raises(LimitExceeded):
            list(killing_partitions(tuple([1] * 13), 26))

    def test_agrees_with_filtered_full_enumeration(self):
        n = 9
        values = (1, 8, 3, 6, 0)
        fast = {p.blocks for p in killing_partitions(values, n)}
        slow = {
            p.blocks
            for p in all_set_partitions(5)
            if all(sum(values[i] for i in block) % n == 0 for block in p.blocks)
        }
        assert fast == slow
