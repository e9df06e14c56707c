"""One group of tests per acceptance criterion, tagged with ``criterion(n)``.

The terminal summary prints one PASS/FAIL line per criterion.  Criteria
that cannot be met are marked ``xfail(strict=True)`` so they stay red in
that summary while the rest of the suite remains green.
"""

import json
import math
import random
import time

import numpy as np
import pytest
import sympy as sp

from flowsym import numflow, reference, regen
from flowsym.determine import determining_system, verify_generator
from flowsym.fileio import fixture_dir, load_fields, load_pde
from flowsym.geoflow import (
    FlowKind,
    WarpedGeometry,
    adjudicate_transformed,
    adjudicate_warped,
    heat_algebra,
    heat_alpha_family,
    heat_equation,
    warped_curvature,
    warped_flow_system,
)
from flowsym.grammar import Context, parse
from flowsym.liealg import (
    LABELS,
    jacobi_violations,
    normalize,
    random_vector,
    replay,
    representatives,
    structure_constants,
    surface_algebra,
)

FIX = fixture_dir()
GOLDEN = regen.GOLDEN
V = sp.symbols("v1:7")
EPS = sp.Symbol("eps")


def golden(name):
    return json.loads((GOLDEN / name).read_text())


# ---------------------------------------------------------------------------
# 1. determining tables

# rows where the printed coefficient is wrong, with the corrected value
TABLE_CORRECTIONS = {
    "ricci-surface": {"exp(-w)*w_y*w_xx": "-2*tau[y,w]", "w_xt": "-2*tau[x]"},
    "hyperbolic-surface": {},
}
UNPRINTABLE = {"ricci-surface": {"w_xx": "-phi[] + tau[t] - 2*xi[x]"}, "hyperbolic-surface": {}}


@pytest.mark.criterion(1)
@pytest.mark.parametrize("name", ["ricci-surface", "hyperbolic-surface"])
def test_determining_table_matches_published_rows(run_cli, name):
    r = run_cli("determine", f"fixtures/{name.replace('-', '_')}.pde", "--compare", "--json")
    assert r.code == 0
    cmp = r.json()["comparison"]
    rows = {row["monomial"]: row for row in cmp["rows"]}
    assert cmp["unlisted"] == []
    off = {m for m, row in rows.items() if row["verdict"] not in ("agree", "agree up to sign")}
    assert off == set(TABLE_CORRECTIONS[name]) | set(UNPRINTABLE[name])
    for m, corrected in {**TABLE_CORRECTIONS[name], **UNPRINTABLE[name]}.items():
        assert rows[m]["computed"] == corrected


@pytest.mark.criterion(1)
def test_determining_table_example_rows():
    ricci = determining_system(load_pde("ricci-surface"))
    assert ricci.coefficient("w_y*w_yt") == parse("-2*tau[w]", Context.for_jet(ricci.pde.spec))
    assert ricci.coefficient("exp(w)*w_x") == parse("xi[t]", Context.for_jet(ricci.pde.spec))


@pytest.mark.criterion(1)
@pytest.mark.parametrize("name", ["ricci-surface", "hyperbolic-surface"])
def test_determining_table_runtime(name):
    pde = load_pde(name)
    start = time.perf_counter()
    system = determining_system.__wrapped__(pde)
    assert time.perf_counter() - start < 10
    assert len(system.distinct()) == golden(f"determine_{name.replace('-', '_')}.json")["distinct_rows"]


# ---------------------------------------------------------------------------
# 2. generators and families


@pytest.mark.criterion(2)
@pytest.mark.parametrize(
    "pde, fields",
    [
        ("ricci-surface", "ricci-generators"),
        ("hyperbolic-surface", "hyperbolic-generators"),
        ("ricci-surface", "ricci-linear-family"),
        ("ricci-surface", "ricci-quadratic-family"),
    ],
)
def test_generators_and_families_pass(run_cli, pde, fields):
    r = run_cli("verify", pde, fields, "--json")
    assert r.code == 0, r.out
    results = r.json()["results"]
    assert results and all(x["status"] == "PASS" and x["residual"] == "0" for x in results)


@pytest.mark.criterion(2)
def test_six_generators_each():
    for kind in ("ricci", "hyperbolic"):
        pde = load_pde(f"{kind}-surface")
        fields = load_fields(f"{kind}-generators")
        assert [v.name for v in fields] == [f"v{k}" for k in range(1, 7)]
        assert all(verify_generator(v, pde).passed for v in fields)


# ---------------------------------------------------------------------------
# 3. commutator table


@pytest.mark.criterion(3)
def test_commutator_table_exact():
    alg = surface_algebra("ricci")
    entries = 0
    for i in range(6):
        for j in range(6):
            expected = [sp.Integer(reference.COMMUTATOR_TABLE[i][j].get(l + 1, 0)) for l in range(6)]
            assert list(alg.C[i][j]) == expected, (i + 1, j + 1)
            entries += 1
    assert entries == 36


@pytest.mark.criterion(3)
def test_jacobi_identity():
    assert jacobi_violations(surface_algebra("ricci")) == []


@pytest.mark.criterion(3)
def test_commutator_table_via_cli(run_cli):
    r = run_cli("algebra", "ricci-generators", "--json")
    assert r.code == 0
    d = r.json()
    assert d["closed"] and d["jacobi_violations"] == 0
    assert d["commutator"][0][3] == "v1"
    assert d["commutator"][4][1] == "v3"


# ---------------------------------------------------------------------------
# 4. adjoint table


def _published_adjoint(i, j):
    e = parse(reference.ADJOINT_TABLE[i][j], Context())
    return [sp.expand(e).coeff(V[l]) for l in range(6)]


@pytest.mark.criterion(4)
def test_adjoint_table_closed_form():
    alg = surface_algebra("ricci")
    for i in range(6):
        M = alg.adjoint_matrix(i)
        for j in range(6):
            ours = list(M[:, j])
            theirs = _published_adjoint(i, j)
            assert all(sp.simplify(a - b) == 0 for a, b in zip(ours, theirs)), (i + 1, j + 1)


@pytest.mark.criterion(4)
def test_adjoint_special_rows():
    alg = surface_algebra("ricci")
    assert alg.adjoint(3, EPS, 0) == [sp.exp(EPS), 0, 0, 0, 0, 0]
    assert alg.adjoint(5, EPS, 1) == [0, sp.exp(EPS), 0, 0, 0, 0]
    assert alg.adjoint(4, EPS, 1) == [0, sp.cos(EPS), -sp.sin(EPS), 0, 0, 0]


@pytest.mark.criterion(4)
@pytest.mark.parametrize("value", [sp.Rational(1, 2), sp.Integer(1)])
def test_adjoint_numeric_spot_checks(value):
    alg = surface_algebra("ricci")
    for i in range(6):
        closed = np.array(alg.adjoint_matrix(i, value).evalf(30).tolist(), dtype=float)
        assert np.max(np.abs(closed - alg.adjoint_numeric(i, float(value)))) <= 1e-12


# ---------------------------------------------------------------------------
# 5. optimal system


@pytest.fixture(scope="module")
def classified():
    alg = surface_algebra("ricci")
    rng = random.Random(20240601)
    start = time.perf_counter()
    out = []
    for _ in range(1000):
        a = random_vector(rng)
        c = normalize(a, alg)
        out.append((a, c, replay(alg, c.witness, a)))
    return out, time.perf_counter() - start


@pytest.mark.criterion(5)
@pytest.mark.xfail(
    strict=True,
    reason="coefficient vectors with a4 = 0 and a1 != 0 next to v6 or v5 form classes absent from the list",
)
def test_every_representative_in_published_list(classified):
    results, _ = classified
    missing = sorted({c.label for _, c, _ in results if c.label not in LABELS})
    assert not missing, f"classes outside the published list: {missing}"


@pytest.mark.criterion(5)
def test_witness_replay_reproduces_representative(classified):
    results, _ = classified
    for a, c, replayed in results:
        assert replayed == c.representative, a


@pytest.mark.criterion(5)
def test_normalize_idempotent_on_representatives():
    alg = surface_algebra("ricci")
    for label, a in representatives().items():
        c = normalize(a, alg)
        assert c.label == label
        assert c.representative == [sp.nsimplify(z) for z in a]
        again = normalize(c.representative, alg)
        assert again.label == label and again.representative == c.representative


@pytest.mark.criterion(5)
def test_classification_runtime(classified):
    _, elapsed = classified
    assert elapsed < 30


# ---------------------------------------------------------------------------
# 6. transformed solutions


@pytest.mark.criterion(6)
@pytest.mark.parametrize("group", ["G1", "G2", "G3", "G4", "G6"])
def test_transformed_cigar_exact(run_cli, group):
    r = run_cli("flows", "check-transformed", "--kind", "ricci", "--group", group, "--json")
    assert r.code == 0
    (row,) = r.json()["rows"]
    assert row["fixture"] == "cigar"
    assert row["fixture_residual"] == "0" and row["generic_residual"] == "0"


@pytest.mark.criterion(6)
def test_dilation_image_carries_exp_factor():
    from flowsym.geoflow import solution_fixtures, transformed_solution

    fx = solution_fixtures()["cigar"]
    img = transformed_solution(fx.solution, "ricci", "G6")
    x, y, t = sp.symbols("x y t")
    u = sp.exp(img)
    assert sp.simplify(u - sp.exp(-2 * EPS) / (sp.exp(-2 * EPS) * (x**2 + y**2) + sp.exp(4 * t))) == 0


@pytest.mark.criterion(6)
def test_rotation_report_stable():
    rows = [r for r in adjudicate_transformed() if r["group"] == "G5"]
    again = [r for r in adjudicate_transformed() if r["group"] == "G5"]
    assert rows == again
    assert rows == [r for r in golden("transformed.json")["rows"] if r["group"] == "G5"]
    assert {r["variant"] for r in rows} == {"ricci", "hyperbolic"}


# ---------------------------------------------------------------------------
# 7. reductions


@pytest.mark.criterion(7)
@pytest.mark.parametrize("key", sorted(regen.REDUCTION_CASES))
def test_reduction_matches_golden(key):
    report = regen._reduction_report(key, regen.REDUCTION_CASES[key])
    assert report["reduction"]["leftover"] == []
    assert report == golden("reductions.json")[key]


@pytest.mark.criterion(7)
def test_reduction_agreement_per_term():
    g = golden("reductions.json")
    verdicts = {k: g[k]["comparison"]["matches"] for k in regen.REDUCTION_CASES}
    assert verdicts == {
        "ricci-exp": False,
        "ricci-exp-x": False,
        "ricci-scaling": True,
        "hyperbolic-exp": True,
        "hyperbolic-exp-x": True,
        "hyperbolic-scaling": False,
    }


@pytest.mark.criterion(7)
def test_reduce_cli(run_cli):
    case = reference.REDUCTIONS["ricci-scaling"]
    r = run_cli("reduce", "ricci-surface", "ricci-scaling", "--expect", case["printed"], "--json")
    assert r.code == 0
    assert r.json()["comparison"]["matches"]


# ---------------------------------------------------------------------------
# 8. warped geometry

s, t = sp.symbols("s t")
PSI = sp.Function("psi")(s)


@pytest.mark.criterion(8)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_warped_ricci_components(n):
    c = warped_curvature(WarpedGeometry(n, PSI))
    ps, pss = PSI.diff(s), PSI.diff(s, 2)
    assert sp.simplify(c.ricci_radial - (-n * pss / PSI)) == 0
    assert sp.simplify(c.ricci_sphere - (-PSI * pss - (n - 1) * ps**2 + n - 1)) == 0


@pytest.mark.criterion(8)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_warped_flow_systems(n):
    P, Q = sp.Function("varphi")(s, t), sp.Function("psi")(s, t)
    Qs, Qss, Qt = Q.diff(s), Q.diff(s, 2), Q.diff(t)
    ricci = warped_flow_system("ricci", n)
    assert sp.simplify(ricci.phi_equation.rhs - n * Qss / Q * P) == 0
    hyper = warped_flow_system("hyperbolic", n)
    assert sp.simplify(hyper.phi_equation.rhs - (n * Qss / Q * P - P.diff(t) ** 2 / P)) == 0
    jet = Context.for_jet(ricci.pde().spec)
    psi_rhs = parse(f"psi_ss - {n - 1}*(1 - psi_s^2)/psi", jet)
    assert sp.simplify(ricci.psi_equation.rhs - psi_rhs) == 0
    assert sp.simplify(hyper.psi_equation.rhs - (psi_rhs - parse("psi_t^2/psi", jet))) == 0
    assert str(ricci.psi_equation.lhs) == "psi_t" and str(hyper.psi_equation.lhs) == "psi_tt"


@pytest.mark.criterion(8)
def test_round_sphere_curvatures():
    c = warped_curvature(WarpedGeometry(3, sp.sin(s)))
    assert c.K0 == 1 and c.K1 == 1


# ---------------------------------------------------------------------------
# 9. warped numerics


@pytest.mark.criterion(9)
def test_ricci_cylinder(run_cli):
    start = time.perf_counter()
    r = run_cli("simulate", "--kind", "ricci", "--warped", "n=2", "--m", 256, "--T", 0.125, "--init", "cylinder", "--json")
    assert time.perf_counter() - start < 5
    last = r.json()["last"]
    assert last["t"] == pytest.approx(0.125)
    exact = math.sqrt(1 - 2 * 0.125)
    assert abs(last["min_u"] - exact) <= 1e-6 and abs(last["max_u"] - exact) <= 1e-6


@pytest.mark.criterion(9)
def test_hyperbolic_cylinder(run_cli):
    start = time.perf_counter()
    r = run_cli("simulate", "--kind", "hyperbolic", "--warped", "n=2", "--m", 256, "--T", 0.5, "--init", "cylinder", "--json")
    assert time.perf_counter() - start < 5
    last = r.json()["last"]
    assert last["t"] == pytest.approx(0.5)
    for key in ("min_u", "max_u"):
        assert abs(last[key] ** 2 - (1 - 0.5**2)) <= 1e-6
        assert abs(last[key] - math.sqrt(0.75)) <= 1e-6


# ---------------------------------------------------------------------------
# 10. surface numerics and equivariance


@pytest.fixture(scope="module")
def cigar_errors():
    out = {}
    for N in (32, 64, 128):
        grid = numflow.cigar_grid(N)
        run = numflow.solve_surface("ricci", grid, grid.sample(numflow.cigar, 0.0), 0.1)
        exact = grid.sample(numflow.cigar, run.time)
        out[N] = float(np.max(np.abs(run.u - exact) / exact))
    return out


@pytest.mark.criterion(10)
@pytest.mark.xfail(
    strict=True,
    reason="the 5-point stencil leaves a 1.4e-3 spatial error on the 64^2 cigar grid",
)
def test_cigar_error_64(run_cli):
    r = run_cli("simulate", "--kind", "ricci", "--surface", "--n", 64, "--L", 8, "--dt", "auto", "--T", 0.1, "--init", "cigar", "--json")
    assert r.code == 0
    assert r.json()["max_rel_error"] <= 1e-3


@pytest.mark.criterion(10)
def test_cigar_convergence_order(cigar_errors):
    e = cigar_errors
    orders = [math.log2(e[32] / e[64]), math.log2(e[64] / e[128])]
    assert min(orders) >= 1.9, orders


@pytest.mark.criterion(10)
@pytest.mark.parametrize("group", ["G2", "G3"])
def test_translation_equivariance(group):
    grid = numflow.Grid2D(32, 8.0)
    rep = numflow.equivariance_check(
        "ricci", group, 4 * grid.h, grid, 0.05, u0=numflow.random_fourier(3, grid.L)
    )
    assert rep.discrepancy <= 1e-12


@pytest.mark.criterion(10)
def test_time_scaling_equivariance(run_cli):
    r = run_cli("equivariance", "--kind", "ricci", "--group", "G4", "--eps", "ln(2)", "--init", "cigar", "--n", 64, "--T", 0.05, "--json")
    assert r.code == 0
    assert r.json()["discrepancy"] <= 1e-6


# ---------------------------------------------------------------------------
# 11. warped claims


@pytest.mark.criterion(11)
def test_warped_claims_golden_deterministic():
    first = adjudicate_warped()
    assert first == adjudicate_warped()
    g = golden("warped_claims.json")
    assert first["generators"] == g["generators"]
    assert first["equations"] == g["equations"]


@pytest.mark.criterion(11)
def test_open_question_verdicts():
    g = golden("warped_claims.json")
    status = {(r["flow"], r["n"], r["generator"]): r["status"] for r in g["generators"]}
    assert status[("ricci", 1, "v3")] == "FAIL"
    assert status[("ricci", 1, "heat-scaling")] == "PASS"
    assert [status[("hyperbolic", 1, f"v{k}")] for k in range(1, 7)] == ["PASS"] * 3 + ["FAIL"] * 3
    eqs = {r["flow"]: r["is_heat_equation"] for r in g["equations"]}
    assert eqs == {"ricci": True, "hyperbolic": False}
    inv = golden("reductions.json")
    assert inv["ricci-exp"]["invariance"]["v4 + v2"]["invariant"] is False
    assert inv["ricci-exp-x"]["invariance"]["v4 + v2"]["invariant"] is True


@pytest.mark.criterion(11)
def test_heat_algebra_on_heat_equation(run_cli):
    heat = heat_equation()
    assert all(verify_generator(v, heat).passed for v in heat_algebra())
    r = run_cli("verify", "heat", "heat-algebra", "--json")
    assert r.code == 0 and len(r.json()["results"]) == 6


@pytest.mark.criterion(11)
def test_heat_alpha_family():
    rows = heat_alpha_family()
    assert len(rows) >= 3
    assert all(r["solves_heat"] and r["status"] == "PASS" for r in rows)
    assert rows == golden("warped_claims.json")["heat_alpha_family"]
