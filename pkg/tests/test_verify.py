import dataclasses

import pytest

from conftest import example_resolution
from crdcache.construct import ConstructionParams, construct
from crdcache.scheme import TransmissionPlan, build_topology, generate_plan, place, sample_demands
from crdcache.verify import decode_user, payload_trial, verify_plan


def setup_instance(res, z, seed=0):
    top = build_topology(res, z)
    demands = sample_demands(top.K, seed=seed)
    return generate_plan(top, demands), place(top, demands.n_files), top, demands


def qary(q, m):
    return construct(ConstructionParams(q, m, 1))[1]


def corrupt(plan, tx=0, term=0):
    """Shift one term to the next point index."""
    t = plan.transmissions[tx]
    u, f, p = t.terms[term]
    terms = list(t.terms)
    terms[term] = (u, f, (p + 1) % plan.v)
    txs = list(plan.transmissions)
    txs[tx] = dataclasses.replace(t, terms=tuple(terms))
    return dataclasses.replace(plan, transmissions=tuple(txs))


class TestDecodeUser:
    def test_z2(self, backend):
        plan, pl, top, demands = setup_instance(qary(2, 3), 2)
        for u in top.users:
            got = decode_user(plan, pl, top, u, demands, backend=backend)
            assert got == set(range(8))
            assert len(top.accessible_points(u)) == 6

    def test_z3(self, backend):
        plan, pl, top, demands = setup_instance(qary(2, 3), 3)
        for u in top.users:
            assert decode_user(plan, pl, top, u, demands, backend=backend) == set(range(8))
            assert len(top.accessible_points(u)) == 7

    def test_corrupted_plan_fails_someone(self, backend):
        plan, pl, top, demands = setup_instance(qary(2, 3), 2)
        bad = corrupt(plan)
        results = [decode_user(bad, pl, top, u, demands, backend=backend) for u in top.users]
        assert any(r != set(range(8)) for r in results)


class TestVerifyPlan:
    @pytest.mark.parametrize("q,m", [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4)])
    def test_grid(self, q, m, backend):
        for z in range(2, m + 1):
            plan, pl, top, demands = setup_instance(qary(q, m), z, seed=q * m + z)
            rep = verify_plan(plan, pl, top, demands, backend=backend)
            assert rep.all_decodable and rep.one_shot
            assert rep.gain_histogram == {2**z: len(plan.transmissions)}
            for outcome, user in zip(rep.users, top.users):
                assert outcome.cached == len(top.accessible_points(user))
                assert outcome.delivered == q**m - outcome.cached
                assert outcome.delivered * q**z == q**m * (q - 1) ** z

    @pytest.mark.parametrize("name,z", [("example1", 2), ("example3", 2), ("example4", 2), ("example4", 3)])
    def test_hand_entered(self, name, z, backend):
        plan, pl, top, demands = setup_instance(example_resolution(name), z)
        rep = verify_plan(plan, pl, top, demands, backend=backend)
        assert rep.all_decodable and rep.one_shot
        assert set(rep.gain_histogram) == {2**z}

    def test_empty_plan(self, backend):
        plan, pl, top, demands = setup_instance(qary(2, 3), 2)
        empty = dataclasses.replace(plan, transmissions=())
        rep = verify_plan(empty, pl, top, demands, backend=backend)
        assert not rep.all_decodable and not rep.one_shot
        assert rep.failures == list(range(top.K))
        assert all(u.delivered == 0 and u.cached == 6 for u in rep.users)

    def test_corrupted(self, backend):
        plan, pl, top, demands = setup_instance(qary(3, 2), 2)
        rep = verify_plan(corrupt(plan, tx=4, term=2), pl, top, demands, backend=backend)
        assert not rep.all_decodable
        assert rep.failures

    def test_duplicate_transmission_breaks_one_shot(self, backend):
        plan, pl, top, demands = setup_instance(qary(2, 3), 2)
        doubled = dataclasses.replace(plan, transmissions=plan.transmissions + plan.transmissions[:1])
        rep = verify_plan(doubled, pl, top, demands, backend=backend)
        assert rep.all_decodable and not rep.one_shot

    def test_malformed_term_counted(self, backend):
        plan, pl, top, demands = setup_instance(qary(2, 3), 2)
        t = plan.transmissions[0]
        terms = ((t.terms[0][0], t.terms[0][1], 99),) + t.terms[1:]
        txs = (dataclasses.replace(t, terms=terms),) + plan.transmissions[1:]
        rep = verify_plan(dataclasses.replace(plan, transmissions=txs), pl, top, demands, backend=backend)
        assert rep.malformed_terms == 1 and not rep.all_decodable

    def test_report_json(self):
        plan, pl, top, demands = setup_instance(qary(2, 3), 2)
        doc = verify_plan(plan, pl, top, demands).to_json()
        assert doc["all_decodable"] and doc["one_shot"]
        assert doc["gain_histogram"] == {"4": 6} and doc["failures"] == []

    def test_fixpoint_needs_two_rounds(self, backend):
        # step1 = A xor B is undecodable until step2 (listed after it) reveals B
        plan, pl, top, demands = setup_instance(qary(2, 2), 2)
        u0 = 0
        want = demands.demand[u0]
        missing = sorted(set(range(4)) - top.accessible_points(top.users[u0]))
        assert len(missing) == 1
        (p,) = missing
        other_file = (want + 1) % demands.n_files
        t = plan.transmissions[0]
        step1 = dataclasses.replace(t, terms=((u0, want, p), (u0, other_file, p)))
        step2 = dataclasses.replace(t, terms=((u0, other_file, p),))
        chained = TransmissionPlan(plan.z, plan.K, plan.v, (step1, step2))
        assert decode_user(chained, pl, top, top.users[u0], demands, backend=backend) == set(range(4))
        assert verify_plan(chained, pl, top, demands, backend=backend).failures == list(range(1, top.K))


class TestPayload:
    @pytest.mark.parametrize("q,m,z", [(2, 3, 2), (2, 3, 3), (3, 2, 2), (3, 3, 2), (2, 4, 4)])
    def test_agrees_with_symbolic(self, q, m, z, backend):
        plan, pl, top, demands = setup_instance(qary(q, m), z)
        assert verify_plan(plan, pl, top, demands, backend=backend).all_decodable
        for seed in range(4):
            assert payload_trial(plan, pl, top, demands, seed=seed, backend=backend)

    def test_seed0(self, backend):
        plan, pl, top, demands = setup_instance(qary(2, 3), 2)
        assert payload_trial(plan, pl, top, demands, seed=0, backend=backend)

    @pytest.mark.parametrize("tx,term", [(0, 0), (2, 3), (5, 1)])
    def test_corrupted_fails(self, tx, term, backend):
        plan, pl, top, demands = setup_instance(qary(2, 3), 2)
        bad = corrupt(plan, tx, term)
        for seed in range(3):
            assert not payload_trial(bad, pl, top, demands, seed=seed, backend=backend)
        assert not verify_plan(bad, pl, top, demands, backend=backend).all_decodable

    def test_agreement_over_20_seeds(self):
        plan, pl, top, demands = setup_instance(qary(2, 3), 2)
        bad = corrupt(plan)
        for seed in range(20):
            assert payload_trial(plan, pl, top, demands, seed=seed) is True
            assert payload_trial(bad, pl, top, demands, seed=seed) is False
