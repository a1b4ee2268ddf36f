import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmzv.errors import AdmissibilityError, MembershipError, ParameterError
from qmzv.words import (
    BAR1,
    H0,
    H1,
    HGEQ2,
    AlgebraElement,
    BarIndex,
    bar_from_pairs,
    element_from_json,
    element_to_json,
    format_element,
    format_word,
    index_from_word,
    index_weight,
    pair_weight,
    pairs_from_bar,
    theta,
    weight,
    word_from_index,
    word_in,
)


def all_indices(max_weight):
    """All composition indices of weight <= max_weight, the empty one included."""
    out = [()]
    for w in range(1, max_weight + 1):
        for r in range(1, w + 1):
            for cuts in itertools.combinations(range(1, w), r - 1):
                bounds = (0,) + cuts + (w,)
                out.append(tuple(bounds[i + 1] - bounds[i] for i in range(r)))
    return out


def test_word_from_index_examples():
    assert word_from_index(()) == ""
    assert word_from_index((1,)) == "y"
    assert word_from_index((2,)) == "yx"
    assert word_from_index((3, 1)) == "yxxy"
    assert word_from_index((1, 2)) == "yyx"


def test_index_round_trip_exhaustive_weight_8():
    ks = all_indices(8)
    # compositions of weight w come in 2^(w-1) flavors; plus the empty index
    assert len(ks) == 1 + sum(2 ** (w - 1) for w in range(1, 9))
    for k in ks:
        assert index_from_word(word_from_index(k)) == k


def test_index_from_word_rejects_non_h1():
    with pytest.raises(MembershipError):
        index_from_word("xy")
    with pytest.raises(ParameterError):
        index_from_word("yza")


def test_membership_examples():
    assert word_in("", H1) and word_in("", H0) and word_in("", HGEQ2)
    assert word_in("yxxy", H1)
    assert not word_in("xy", H1)
    assert word_in("yx", H0)
    assert not word_in("y", H0)
    assert word_in("yxx", HGEQ2)
    assert word_in("yxyx", HGEQ2)
    assert not word_in("yxy", HGEQ2)
    assert not word_in("yyx", HGEQ2)


def test_space_inclusions_on_random_generated_elements():
    rng = random.Random(7)
    for _ in range(1000):
        # a random product of HGEQ2 generator blocks: yx then x | yx blocks
        blocks = ["yx"] + [rng.choice(["x", "yx"]) for _ in range(rng.randrange(4))]
        w = "".join(blocks)
        assert word_in(w, HGEQ2)
        assert word_in(w, H0)
        assert word_in(w, H1)


def test_theta_signs_and_involution():
    u = AlgebraElement({"y": 1, "yx": 2, "yxx": -1})
    t = theta(u)
    assert t.coeff("y") == -1
    assert t.coeff("yx") == 2
    assert t.coeff("yxx") == 1
    assert theta(t) == u


@settings(max_examples=50, deadline=None)
@given(
    st.dictionaries(
        st.text(alphabet="xy", max_size=5), st.integers(-5, 5), max_size=6
    )
)
def test_theta_is_an_involution(terms):
    u = AlgebraElement(terms)
    assert theta(theta(u)) == u


def test_element_canonicalization():
    u = AlgebraElement({"y": 1}) + AlgebraElement({"y": -1})
    assert u.is_zero()
    v = AlgebraElement({"yx": 2, "y": 0})
    assert v.terms() == (("yx", 2),)
    # rebuilding from terms is the identity
    assert AlgebraElement(dict(v.terms())) == v


def test_element_product_concatenates():
    a = AlgebraElement({"y": 1, "yx": -2})
    b = AlgebraElement({"x": 3})
    prod = a * b
    assert prod.terms() == (("yx", 3), ("yxx", -6))
    assert 2 * a == a + a


def test_element_json_round_trip_sorted():
    u = AlgebraElement({"yxx": -3, "y": 1, "yx": 2})
    doc = element_to_json(u)
    assert [t["word"] for t in doc["terms"]] == ["y", "yx", "yxx"]
    assert element_from_json(doc) == u


def test_format_word_and_element():
    assert format_word("") == "1"
    assert format_word("yxxy") == "y x^2 y"
    assert format_word("yxx") == "y x^2"
    u = AlgebraElement({"yxx": 1, "y": -2})
    assert format_element(u) == "-2 y + y x^2"
    assert format_element(AlgebraElement.zero()) == "0"


def test_bar_index_admissibility_and_weight():
    assert BarIndex((BAR1, 2)).is_admissible()
    assert not BarIndex((2, BAR1)).is_admissible()
    assert BarIndex(()).is_admissible()
    assert BarIndex((BAR1, BAR1, 3, 1)).weight() == 6
    assert weight(BarIndex((BAR1, 2))) == 3


def test_pair_codec_examples():
    assert pairs_from_bar(BarIndex((BAR1, 2))) == (2, 2)
    assert pairs_from_bar(BarIndex((3,))) == (1, 3)
    assert pairs_from_bar(BarIndex((BAR1, BAR1, 1, 2))) == (3, 1, 1, 2)
    assert bar_from_pairs((2, 2)).entries == (BAR1, 2)
    with pytest.raises(AdmissibilityError):
        pairs_from_bar(BarIndex((2, BAR1)))


def test_pair_codec_round_trip():
    for flat in itertools.product(range(1, 4), repeat=4):
        k = bar_from_pairs(flat)
        assert k.is_admissible()
        assert pairs_from_bar(k) == flat
        assert k.weight() == pair_weight(flat)


def test_weights():
    assert index_weight((2, 3)) == 5
    assert pair_weight((2, 1)) == 2
    assert pair_weight((2, 1, 1, 3)) == 5
    assert weight("yxxy") == 4
    assert weight((2, 3)) == 5
