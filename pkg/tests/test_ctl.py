import random

import pytest

from oracles import bfs_distance_oracle, ctl_sat_oracle, random_ctl_formula, random_model
from osmcheck.ctl import Assignment, FinitePath, Lasso, check_config, check_ctl, sat_set
from osmcheck.errors import UnknownAtomError
from osmcheck.formulas import parse_ctl, parse_prop


def is_path(model, states):
    return all(b in model.successors(a) for a, b in zip(states, states[1:]))


class TestSatSet:
    def test_ag_true_is_everything(self, request_model):
        assert sat_set(request_model, parse_ctl("AG true")) == request_model.states

    def test_ef_error_from_initial(self, request_model):
        assert request_model.initial <= sat_set(request_model, parse_ctl("EF error"))

    def test_ef_exit_from_initial(self, request_model):
        assert request_model.initial <= sat_set(request_model, parse_ctl("EF exit"))

    def test_auth_precedes_fetch(self, request_model):
        f = parse_ctl("!E[!action:isUserAuthorized U action:fetch]")
        assert request_model.initial <= sat_set(request_model, f)

    def test_unknown_atom_warns(self, request_model):
        warnings = []
        assert sat_set(request_model, parse_ctl("EF nonsense"), warnings=warnings) == frozenset()
        assert len(warnings) == 1 and "nonsense" in warnings[0]

    def test_unknown_atom_strict(self, request_model):
        with pytest.raises(UnknownAtomError):
            sat_set(request_model, parse_ctl("EF nonsense"), strict_atoms=True)

    def test_complementation(self):
        rng = random.Random(31)
        for _ in range(100):
            model = random_model(rng)
            f = random_ctl_formula(rng, depth=3, atoms=("p0", "p1"))
            from osmcheck.formulas import Not

            assert sat_set(model, Not(f)) == model.states - sat_set(model, f)

    def test_duality_laws(self):
        rng = random.Random(32)
        pairs = [("AG p0", "!EF !p0"), ("AF p0", "!EG !p0"), ("AX p0", "!EX !p0"),
                 ("A[p0 U p1]", "!(E[!p1 U (!p0 & !p1)] | EG !p1)")]
        for _ in range(50):
            model = random_model(rng)
            for a, b in pairs:
                assert sat_set(model, parse_ctl(a)) == sat_set(model, parse_ctl(b))

    def test_eg_is_fixpoint(self):
        rng = random.Random(33)
        for _ in range(50):
            model = random_model(rng)
            region = sat_set(model, parse_ctl("EG p0"))
            hold = sat_set(model, parse_ctl("p0"))
            assert region <= hold
            assert all(any(t in region for t in model.successors(s)) for s in region)

    def test_oracle_equivalence(self):
        rng = random.Random(34)
        for _ in range(300):
            model = random_model(rng)
            f = random_ctl_formula(rng)
            assert sat_set(model, f) == ctl_sat_oracle(model, f)


class TestCheckCtl:
    def test_holding_ef_has_witness_path(self, request_model):
        result = check_ctl(request_model, parse_ctl("EF error"))
        assert result.holds
        assert isinstance(result.evidence, FinitePath)
        path = result.evidence.states
        assert path[0] in request_model.initial
        assert "error" in request_model.labels(path[-1])
        assert is_path(request_model, path)

    def test_failing_ag_has_counterexample(self, request_model):
        result = check_ctl(request_model, parse_ctl("AG !error"))
        assert not result.holds
        path = result.evidence.states
        assert path[0] in request_model.initial
        assert "error" in request_model.labels(path[-1])
        assert is_path(request_model, path)

    def test_ag_counterexample_is_bfs_minimal(self):
        rng = random.Random(41)
        checked = 0
        while checked < 200:
            model = random_model(rng)
            result = check_ctl(model, parse_ctl("AG !p0"))
            if result.holds:
                continue
            checked += 1
            path = result.evidence.states
            assert is_path(model, path) and path[0] in model.initial
            assert "p0" in model.labels(path[-1])
            bad = {s for s in model.states if "p0" in model.labels(s)}
            assert len(path) == bfs_distance_oracle(model, model.initial, bad)

    def test_failing_af_has_lasso(self):
        rng = random.Random(42)
        checked = 0
        while checked < 100:
            model = random_model(rng)
            result = check_ctl(model, parse_ctl("AF p0"))
            if result.holds:
                continue
            checked += 1
            lasso = result.evidence
            assert isinstance(lasso, Lasso)
            run = lasso.prefix + lasso.cycle
            assert run[0] in model.initial
            assert is_path(model, run)
            assert lasso.cycle[0] in model.successors(run[-1])
            assert all("p0" not in model.labels(s) for s in run)

    def test_holding_eg_has_lasso(self):
        rng = random.Random(43)
        checked = 0
        while checked < 50:
            model = random_model(rng)
            result = check_ctl(model, parse_ctl("EG p0"))
            if not result.holds:
                continue
            checked += 1
            lasso = result.evidence
            run = lasso.prefix + lasso.cycle
            assert run[0] in model.initial and is_path(model, run)
            assert all("p0" in model.labels(s) for s in run)

    def test_failing_negated_until_points_at_violation(self, tmp_path):
        # with access control removed, !E[!auth U fetch] fails; the
        # counterexample is a path reaching fetch without passing auth
        from conftest import make_edited_corpus
        from osmcheck.cfg import build_cfg
        from osmcheck.kripke import from_cfg
        from osmcheck.pipeline import load_program
        from osmcheck.weaving import weave

        edited = make_edited_corpus(tmp_path / "c", drop="access_control.osm")
        model = from_cfg(build_cfg(weave(load_program([edited])), "HealthService.requestHistory"))
        result = check_ctl(model, parse_ctl("!E[!action:isUserAuthorized U action:fetch]"))
        assert not result.holds
        path = result.evidence.states
        assert is_path(model, path) and path[0] in model.initial
        assert "action:fetch" in model.labels(path[-1])
        assert all("action:isUserAuthorized" not in model.labels(s) for s in path[:-1])

    def test_eu_witness_respects_left_operand(self):
        rng = random.Random(44)
        checked = 0
        while checked < 100:
            model = random_model(rng)
            result = check_ctl(model, parse_ctl("E[p0 U p1]"))
            if not result.holds or result.evidence is None:
                continue
            checked += 1
            path = result.evidence.states
            assert is_path(model, path) and path[0] in model.initial
            assert "p1" in model.labels(path[-1])
            assert all("p0" in model.labels(s) for s in path[:-1])

    def test_ex_witness(self):
        rng = random.Random(45)
        checked = 0
        while checked < 50:
            model = random_model(rng)
            result = check_ctl(model, parse_ctl("EX p0"))
            if not result.holds:
                continue
            checked += 1
            a, b = result.evidence.states
            assert a in model.initial and b in model.successors(a)
            assert "p0" in model.labels(b)

    def test_deterministic(self, request_model):
        f = parse_ctl("AG !error")
        assert check_ctl(request_model, f) == check_ctl(request_model, f)


class TestCheckConfig:
    def test_pass_and_fail(self):
        entries = [("ok", parse_prop("P & A")), ("bad", parse_prop("P & !A"))]
        results = dict(check_config(entries, {"P": True, "A": True}))
        assert results["ok"].holds and results["ok"].evidence is None
        assert not results["bad"].holds
        assert isinstance(results["bad"].evidence, Assignment)
        assert results["bad"].evidence.valuation == {"P": True, "A": True}

    def test_unknown_atom_propagates(self):
        with pytest.raises(UnknownAtomError):
            check_config([("x", parse_prop("Z"))], {"P": True})
