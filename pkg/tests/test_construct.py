import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crdcache.construct import ConstructionParams, construct, design_json, predicted_params, qary_expand
from crdcache.design import check_maximal_point_count, crd_profile, validate_resolution
from crdcache.errors import InvalidParamsError, OutOfRangeError
from reference_designs import REFERENCE, block_set, class_sets


def built_classes(res):
    return [[res.design.blocks[j] for j in cls] for cls in res.classes]


class TestQaryExpand:
    def test_examples(self):
        assert qary_expand(6, 2, 3) == (0, 1, 1)
        assert qary_expand(0, 5, 4) == (0, 0, 0, 0)
        assert qary_expand(7, 3, 2) == (1, 2)

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            qary_expand(8, 2, 3)
        with pytest.raises(OutOfRangeError):
            qary_expand(-1, 2, 3)

    @given(st.integers(2, 9), st.integers(1, 6), st.data())
    def test_roundtrip(self, q, m, data):
        y = data.draw(st.integers(0, q**m - 1))
        digits = qary_expand(y, q, m)
        assert all(0 <= d < q for d in digits)
        assert sum(d * q**i for i, d in enumerate(digits)) == y


class TestParams:
    @pytest.mark.parametrize("q,m,t", [(1, 3, 1), (2, 1, 1), (2, 3, 0), (2, 3, 3)])
    def test_invalid(self, q, m, t):
        with pytest.raises(InvalidParamsError):
            ConstructionParams(q, m, t)

    def test_predicted(self):
        p = predicted_params(ConstructionParams(2, 4, 1))
        assert (p.v, p.b, p.r, p.k, p.b_r) == (16, 8, 4, 8, 2)
        assert p.mu == {2: 4, 3: 2, 4: 1}
        p = predicted_params(ConstructionParams(4, 2, 1))
        assert (p.v, p.b, p.r, p.k) == (16, 8, 2, 4) and p.mu == {2: 1}
        p = predicted_params(ConstructionParams(2, 3, 2))
        assert (p.v, p.b, p.r, p.k) == (8, 12, 3, 2) and p.mu is None


class TestConstruct:
    @pytest.mark.parametrize("key", sorted(REFERENCE))
    def test_reference_listing(self, key):
        _, res = construct(ConstructionParams(*key))
        got = built_classes(res)
        assert block_set(got) == block_set(REFERENCE[key])
        assert class_sets(got) == class_sets(REFERENCE[key])

    def test_2_3_2_shape(self):
        d, res = construct(ConstructionParams(2, 3, 2))
        assert d.b == 12 and d.k == 2 and res.r == 3 and res.b_r == 4

    def test_canonical_order(self):
        _, res = construct(ConstructionParams(3, 2, 1))
        assert built_classes(res) == [
            [(0, 3, 6), (1, 4, 7), (2, 5, 8)],
            [(0, 1, 2), (3, 4, 5), (6, 7, 8)],
        ]

    def test_passes_validation(self):
        d, res = construct(ConstructionParams(3, 3, 2))
        assert validate_resolution(d, res.classes) == res

    def test_json_provenance(self):
        params = ConstructionParams(2, 3, 1)
        _, res = construct(params)
        doc = design_json(params, res)
        assert doc["family"] == "qary" and (doc["q"], doc["m"], doc["t"]) == (2, 3, 1)
        assert doc["v"] == 8 and len(doc["blocks"]) == 6 and len(doc["classes"]) == 3

    @pytest.mark.parametrize("key", [(2, 3, 2), (2, 4, 2), (2, 4, 3)])
    def test_rd_rows_are_not_crd(self, key):
        _, res = construct(ConstructionParams(*key))
        assert not crd_profile(res).is_crd


@st.composite
def params(draw):
    q = draw(st.integers(2, 4))
    m = draw(st.integers(2, 4))
    t = draw(st.integers(1, m - 1))
    return ConstructionParams(q, m, t)


@settings(max_examples=25, deadline=None)
@given(params())
def test_matches_predicted_counts(p):
    d, res = construct(p)
    pred = predicted_params(p)
    assert (d.v, d.b, d.k, res.r, res.b_r) == (pred.v, pred.b, pred.k, pred.r, pred.b_r)
    assert pred.v == pred.b_r * pred.k and pred.b == pred.r * pred.b_r
    assert pred.b == p.q**p.t * comb(p.m, p.t)


@settings(max_examples=25, deadline=None)
@given(params())
def test_block_membership_oracle(p):
    _, res = construct(p)
    coords = list(itertools.combinations(range(p.m), p.t))
    for cls, J in zip(res.classes, coords):
        for j in cls:
            block = set(res.design.blocks[j])
            some = qary_expand(min(block), p.q, p.m)
            a = [some[c] for c in J]
            for y in range(p.q**p.m):
                dig = qary_expand(y, p.q, p.m)
                assert (y in block) == all(dig[c] == a_c for c, a_c in zip(J, a))


@settings(max_examples=12, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4))
def test_t1_is_maximal_crd_with_predicted_mu(q, m):
    _, res = construct(ConstructionParams(q, m, 1))
    prof = crd_profile(res)
    assert prof.mu == predicted_params(ConstructionParams(q, m, 1)).mu
    assert prof.is_maximal and prof.mu[m] == 1
    assert check_maximal_point_count(res, prof) == {"applicable": True, "holds": True}
