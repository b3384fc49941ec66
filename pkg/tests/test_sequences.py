import pytest
from hypothesis import given, strategies as st

from rifslab import OmegaSeq, UsageError, omega_distance, splice

seqs = st.builds(
    OmegaSeq,
    st.lists(st.integers(1, 4), max_size=6).map(tuple),
    st.lists(st.integers(1, 4), min_size=1, max_size=5).map(tuple))


def test_cycle_must_be_non_empty():
    with pytest.raises(UsageError, match="cycle must be non-empty"):
        OmegaSeq((1,), ())


def test_entries_are_one_based_positive():
    with pytest.raises(UsageError):
        OmegaSeq((0,), (1,))
    with pytest.raises(UsageError):
        OmegaSeq((), (1, -2))
    om = OmegaSeq((2,), (1, 3))
    with pytest.raises(UsageError):
        om.entry(0)


def test_entry_walks_prefix_then_cycle():
    om = OmegaSeq((2, 2), (1, 3))
    assert [om.entry(k) for k in range(1, 8)] == [2, 2, 1, 3, 1, 3, 1]


def test_unfold_and_shift():
    om = OmegaSeq((2,), (1, 3))
    assert om.unfold(6) == (2, 1, 3, 1, 3, 1)
    assert om.shift(1).unfold(4) == (1, 3, 1, 3)
    assert om.shift(2).unfold(4) == (3, 1, 3, 1)
    assert om.shift(0) == om
    with pytest.raises(UsageError):
        om.shift(-1)


def test_str_form():
    assert str(OmegaSeq((1, 2), (3,))) == "(1,2|3)"
    assert str(OmegaSeq((), (1,))) == "(|1)"


def test_distance_known_values():
    a = OmegaSeq((), (1,))
    b = OmegaSeq((1, 1, 1), (2,))
    # first disagreement at position 4
    assert omega_distance(a, b) == 2.0 ** -4
    assert omega_distance(a, a) == 0.0


def test_distance_detects_equal_representations():
    # same sequence written two ways
    a = OmegaSeq((1,), (2, 1))
    b = OmegaSeq((1, 2), (1, 2))
    assert omega_distance(a, b) == 0.0


@given(seqs, seqs)
def test_distance_symmetric(u, v):
    assert omega_distance(u, v) == omega_distance(v, u)


@given(seqs, seqs, seqs)
def test_distance_ultrametric(u, v, w):
    # powers of two, so no tolerance is needed
    assert omega_distance(u, w) <= max(omega_distance(u, v),
                                       omega_distance(v, w))


@given(seqs, seqs)
def test_distance_zero_iff_sequences_agree(u, v):
    horizon = len(u.prefix) + len(v.prefix) + 4 * 5 * 3
    same = u.unfold(horizon) == v.unfold(horizon)
    assert (omega_distance(u, v) == 0.0) == same


def test_splice_keeps_head_and_switches_tail():
    om = OmegaSeq((), (1,))
    tail = OmegaSeq((3,), (2,))
    v = splice(om, 4, tail)
    assert v.unfold(8) == (1, 1, 1, 1, 3, 2, 2, 2)


def test_splice_zero_is_tail():
    tail = OmegaSeq((2,), (1,))
    assert splice(OmegaSeq((), (1,)), 0, tail) == tail


def test_splice_rejects_negative_depth():
    with pytest.raises(UsageError):
        splice(OmegaSeq((), (1,)), -1, OmegaSeq((), (1,)))


@given(seqs, st.integers(0, 40), seqs)
def test_splice_stays_within_two_power_k(om, k, tail):
    assert omega_distance(om, splice(om, k, tail)) <= 2.0 ** -k


@given(seqs, st.integers(0, 12))
def test_splicing_own_tail_reproduces_the_sequence(om, k):
    assert omega_distance(om, splice(om, k, om.shift(k))) == 0.0
