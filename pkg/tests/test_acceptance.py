"""One test per acceptance criterion; each records a PASS/FAIL line shown in the run summary."""
import json
import time
from pathlib import Path

import pytest

from conftest import record_acceptance
from dgha import generators as gen
from dgha import verify
from dgha.cdga import ground_field, monomial_quotient
from dgha.exactfield import FieldSpec
from dgha.invariants import HOLDS, check_fj_koszul, is_gorenstein
from dgha.modules import formal_module, quotient_by_element, quotient_module, restrict
from dgha.presentation import build, element
from dgha.resolutions import graded_minimal_resolution, minimal_sppj, projective_dimension

QQ = FieldSpec.rationals()
ARTIFACTS = Path(__file__).resolve().parent.parent / "artifacts"

pytestmark = pytest.mark.acceptance


def _suite(name, seed, count):
    t = time.perf_counter()
    res = verify.run_suite(name, seed, count)
    return res, time.perf_counter() - t


def _line(res, dt):
    c = res.counts()
    return f"{len(res.reports)} reports, {c[HOLDS]} Holds, {c['Violated']} Violated, {c['Inconclusive']} Inconclusive, {dt:.1f}s"


def test_example_reproduction():
    t = time.perf_counter()
    R = monomial_quotient(QQ, ["x"], [(2,)])
    x = QQ.array([0, 1])
    S, phi = quotient_by_element(R, x)
    M = restrict(quotient_module(R.regular, x, S=S), phi)
    res = minimal_sppj(M)
    pd = projective_dimension(M, res=res)
    gens = graded_minimal_resolution(formal_module(M), 10)
    dt = time.perf_counter() - t
    ok = (M.hdims == {-1: 1, 0: 1} and res.terminated and res.length == 1 and res.ranks == [1, 1]
          and pd.value == 1 and len(gens) == 11 and bool(gens[10]) and dt < 1.0)
    detail = f"H {M.hdims}, ranks {res.ranks}, pd {pd.value}, graded term at depth 10 {gens[10]}, {dt:.2f}s"
    assert record_acceptance("example reproduction", ok, detail)


def test_three_oracle_bass_agreement():
    res, dt = _suite("oracle", 7, 100)
    ok = res.counts()[HOLDS] == 100 and dt < 120
    assert record_acceptance("three-oracle Bass agreement", ok, _line(res, dt))


def test_auslander_buchsbaum():
    res, dt = _suite("ab", 7, 200)
    ok = res.counts()[HOLDS] == len(res.reports) == 200
    assert record_acceptance("Auslander-Buchsbaum", ok, _line(res, dt))


def test_bass_formula():
    res, dt = _suite("bass", 7, 100)
    ok = res.counts()[HOLDS] == len(res.reports) == 100
    assert record_acceptance("Bass formula", ok, _line(res, dt))


def test_depth_agreement():
    res, dt = _suite("depth", 7, 200)
    c = res.counts()
    completed = len(res.reports) - c["Inconclusive"]
    ok = c["Violated"] == 0 and completed >= 0.99 * len(res.reports)
    assert record_acceptance("depth agreement", ok, _line(res, dt) + f", completed {completed}/{len(res.reports)}")


def test_gorenstein_suite():
    gK = is_gorenstein(ground_field(QQ))
    RnG = monomial_quotient(QQ, ["x", "y"], [(2, 0), (1, 1), (0, 2)])
    gN = is_gorenstein(RnG)
    A = build(verify.A_CI).ring
    aci = check_fj_koszul(A, [element(A, e) for e in verify.A_CI_ELEMENTS])
    res, dt = _suite("fj", 7, 100)
    ok = (gK.verdict is True and gK.shift == 0 and gN.verdict is False and gN.bass.entries.get(0) == 2
          and aci.verdict == HOLDS and res.counts()[HOLDS] == len(res.reports) == 100
          and _has_aci(res))
    detail = (f"K shift {gK.shift}, R_nG gorenstein={gN.verdict} mu0={gN.bass.entries.get(0)}, "
              f"A_ci pair {aci.verdict}, FJ {_line(res, dt)}")
    assert record_acceptance("Gorenstein suite", ok, detail)


def _has_aci(res):
    return verify.A_CI.dumps() in res.reports[0].instance


def test_dualizing_suite():
    res, dt = _suite("dualizing", 7, 60)
    checked = sum(1 for r in res.reports if "homothety" in r.witness)
    ok = res.counts()[HOLDS] == len(res.reports) == 60 and checked > 0
    assert record_acceptance("dualizing suite", ok, _line(res, dt) + f", homothety checked on {checked}")


def test_consistency_lemmas():
    res, dt = _suite("lemmas", 7, 100)
    by = {}
    for r in res.reports:
        by.setdefault(r.theorem, []).append(r.verdict)
    ok = len(by) == 4 and all(len(v) >= 100 and all(x == HOLDS for x in v) for v in by.values())
    detail = ", ".join(f"{k} {v.count(HOLDS)}/{len(v)}" for k, v in sorted(by.items())) + f", {dt:.1f}s"
    assert record_acceptance("consistency lemmas", ok, detail)


def test_conjecture_scan():
    res, dt = _suite("conjecture", 7, 100)
    bad = [r.to_json() for r in res.reports if r.verdict == "Violated"]
    if bad:
        ARTIFACTS.mkdir(exist_ok=True)
        (ARTIFACTS / "amp_counterexamples.json").write_text(json.dumps(bad, indent=2, sort_keys=True))
    decided = [r for r in res.reports if r.verdict != "Inconclusive"]
    ok = not bad and len(decided) == len(res.reports)
    assert record_acceptance("conjecture scan", ok, _line(res, dt) + f", counterexamples {len(bad)}")
