import pytest

from rmac.oracle import g_by_enumeration, profile_feasible_by_enumeration
from rmac.search import InstanceTooLarge


def test_known_values():
    assert g_by_enumeration(3, 2) == 1
    assert g_by_enumeration(3, 1) == 2          # {{1},{2,3}} realizes two sizes
    assert g_by_enumeration(4, 1) == 2
    assert g_by_enumeration(5, 2) == 2
    assert g_by_enumeration(4, 2) == 1
    assert g_by_enumeration(2, 2) == 1
    assert g_by_enumeration(1, 2) == 0


def test_enumeration_caps():
    with pytest.raises(InstanceTooLarge):
        g_by_enumeration(6, 2)
    with pytest.raises(InstanceTooLarge):
        g_by_enumeration(4, 4)
    with pytest.raises(InstanceTooLarge):
        profile_feasible_by_enumeration(7, 2, [2])


def test_profile_enumeration_hand_values():
    assert profile_feasible_by_enumeration(4, 2, [2])
    assert not profile_feasible_by_enumeration(3, 2, [1, 2])
    assert profile_feasible_by_enumeration(5, 2, [1, 2])   # {4},{5},{1,2},{1,3}
    assert not profile_feasible_by_enumeration(4, 2, [0])
    assert profile_feasible_by_enumeration(4, 1, [0])
    assert profile_feasible_by_enumeration(6, 3, [2, 3])
    assert profile_feasible_by_enumeration(5, 2, [])
