"""Individual bound checks and the aggregated report."""

import numpy as np
import pytest

from conftest import random_general_spec
from torsio import (
    ProblemSpec,
    build_graph,
    check_all,
    fiedler_dirichlet,
    fiedler_neumann_p2,
    kohler_jobin_classical,
    kohler_jobin_classical_unit,
    kohler_jobin_modified,
    landscape_lower,
    lambda1_p2,
    make_complete,
    make_path,
    make_star,
    mean_distance_bounds,
    normalized_saint_venant,
    path_inradius_lower,
    polya_szego_product,
    rayleigh_symmetrization_lower,
    saint_venant_general,
    saint_venant_p2_unit,
    symmetrization_upper,
    symmetrization_upper_mtilde,
    torsion_ordered_path,
    tree_inradius_lower,
    trivial_lower,
)

ALL_IDS = (
    "saint_venant_general",
    "saint_venant_p2_unit",
    "symmetrization_upper",
    "symmetrization_upper_mtilde",
    "polya_szego_product",
    "trivial_lower",
    "path_inradius_lower",
    "tree_inradius_lower",
    "rayleigh_symmetrization_lower",
    "mean_distance_lambda_lower",
    "mean_distance_rigidity_upper",
    "inradius_lambda_lower",
    "inradius_rigidity_upper",
    "landscape_lower",
    "fiedler_dirichlet",
    "fiedler_neumann_p2",
    "kohler_jobin_modified",
    "kohler_jobin_classical",
    "kohler_jobin_classical_unit",
    "normalized_saint_venant",
)


def test_saint_venant_general():
    chk = saint_venant_general(make_path(1))
    assert chk.applicable and chk.satisfied
    assert chk.lhs == pytest.approx(1.0, rel=1e-10)
    assert chk.rhs == pytest.approx(1.0)
    chk3 = saint_venant_general(make_path(3))
    assert chk3.lhs == pytest.approx(14.0, rel=1e-10)
    assert chk3.rhs == pytest.approx(27.0)


def test_saint_venant_p2_unit_equality_only_on_paths():
    path = saint_venant_p2_unit(make_path(4))
    assert path.satisfied and abs(path.slack) <= 1e-9 * (1 + path.rhs)
    star = saint_venant_p2_unit(make_star(3))
    assert star.lhs == pytest.approx(11.0, rel=1e-10)
    assert star.rhs == pytest.approx(14.0)
    assert star.slack > 1.0
    k4 = saint_venant_p2_unit(make_complete(4))
    assert k4.applicable and k4.satisfied


def test_symmetrization_upper_equality_on_homogeneous_path():
    chk = symmetrization_upper(make_path(5, "degree"))
    assert chk.satisfied and abs(chk.slack) <= 1e-9 * (1 + chk.rhs)
    star = symmetrization_upper(make_star(3))
    assert star.lhs == pytest.approx(11.0, rel=1e-10)
    assert star.satisfied
    # weighted graphs: inhomogeneous edge weights leave slack
    g = build_graph(
        [("a", 1, 0), ("b", 1, 0), ("c", 1, 0)], [("a", "b", 2.0), ("b", "c", 1.0)]
    )
    chk2 = symmetrization_upper(ProblemSpec(g, frozenset({"a"}), 2.0))
    assert chk2.satisfied and chk2.slack > 0


def test_symmetrization_mtilde():
    chk = symmetrization_upper_mtilde(make_star(3))
    assert chk.applicable and chk.satisfied
    assert chk.rhs == pytest.approx(14.0)  # all unit masses, path reference


def test_torsion_ordered_path_structure():
    spec = make_star(3)
    path = torsion_ordered_path(spec)
    g = path.graph
    assert g.vertex_count == 4
    assert [len(g.neighbors(v)) for v in g.vertices] == [1, 2, 2, 1]
    # center has the smallest torsion value, so it sits next to the boundary
    assert g.edge_weight("p0", "p1") == 1.0
    assert path.dirichlet == frozenset({"p0"})


def test_polya_szego_product():
    chk = polya_szego_product(make_path(3))
    lam = 2.0 * (1.0 - np.cos(np.pi / 7.0))
    assert chk.lhs == pytest.approx(lam * 14.0, rel=1e-9)
    assert chk.rhs == pytest.approx(3.0)
    assert chk.satisfied and chk.slack > 0
    # single edge saturates the product
    single = polya_szego_product(make_path(1))
    assert single.satisfied and abs(single.slack) <= 1e-12


def test_trivial_lower():
    single = trivial_lower(make_path(1))
    assert single.satisfied and abs(single.slack) <= 1e-10
    star = trivial_lower(make_star(3))
    assert star.rhs == pytest.approx(9.0)
    assert star.lhs == pytest.approx(11.0, rel=1e-10)


def test_inradius_lower_bounds():
    path = path_inradius_lower(make_path(3))
    assert path.applicable and path.satisfied
    assert path.rhs == pytest.approx(3.0)  # m_free^p / Inr_p = 9 / 3
    two = path_inradius_lower(make_path(1))
    assert abs(two.slack) <= 1e-10
    non_path = path_inradius_lower(make_star(3))
    assert not non_path.applicable
    tree = tree_inradius_lower(make_star(3))
    assert tree.applicable and tree.satisfied
    assert tree.rhs == pytest.approx(0.5)
    non_tree = tree_inradius_lower(make_complete(4))
    assert not non_tree.applicable


def test_rayleigh_symmetrization():
    path = rayleigh_symmetrization_lower(make_path(4))
    assert path.satisfied and abs(path.slack) <= 1e-9 * (1 + path.rhs)
    star = rayleigh_symmetrization_lower(make_star(3))
    assert star.satisfied and star.slack > 0


def test_mean_distance_bounds_path_values():
    checks = {c.id: c for c in mean_distance_bounds(make_path(3))}
    lam = checks["mean_distance_lambda_lower"]
    assert lam.rhs == pytest.approx(1.0 / 6.0)
    assert lam.satisfied
    rig = checks["mean_distance_rigidity_upper"]
    assert rig.rhs == pytest.approx(9.0 * 2.0)  # m_free^p * Mean_p
    assert rig.satisfied and rig.slack > 0
    assert checks["inradius_lambda_lower"].rhs == pytest.approx(1.0 / 9.0)
    assert checks["inradius_rigidity_upper"].rhs == pytest.approx(27.0)


def test_landscape_lower():
    single = landscape_lower(make_path(1))
    assert abs(single.slack) <= 1e-10
    path = landscape_lower(make_path(3))
    assert path.lhs == pytest.approx(2.0 * (1.0 - np.cos(np.pi / 7.0)), rel=1e-9)
    assert path.rhs == pytest.approx(1.0 / 6.0)
    assert path.satisfied
    for seed, p in ((0, 1.5), (1, 3.0)):
        chk = landscape_lower(random_general_spec(seed, p=p))
        assert chk.applicable and chk.satisfied


def test_fiedler_dirichlet():
    single = fiedler_dirichlet(make_path(1))
    assert single.lhs == pytest.approx(1.0) and single.rhs == pytest.approx(1.0)
    for F in (2, 3, 5):
        chk = fiedler_dirichlet(make_path(F))
        assert chk.satisfied
    weighted = fiedler_dirichlet(make_star(4, "unit", 2.0))
    assert weighted.applicable and weighted.satisfied  # eta accounts for b
    masses = fiedler_dirichlet(make_star(3, "degree"))
    assert not masses.applicable


def test_fiedler_neumann():
    two = fiedler_neumann_p2(make_path(1))
    assert not two.applicable
    k4 = fiedler_neumann_p2(make_complete(4))
    assert k4.applicable
    assert k4.lhs == pytest.approx(4.0)
    assert k4.rhs == pytest.approx(1.0)
    # 4-vertex path: lambda1 = 2 - sqrt(2), bound must stay below
    p4 = fiedler_neumann_p2(make_path(3))
    assert p4.lhs == pytest.approx(2.0 - np.sqrt(2.0), abs=1e-12)
    assert p4.satisfied
    for n in (3, 5, 6, 9):
        chk = fiedler_neumann_p2(make_path(n - 1))
        assert chk.satisfied, (n, chk.lhs, chk.rhs)


def test_kohler_jobin_modified_path_equality():
    for E in (1, 2, 4, 7):
        chk = kohler_jobin_modified(make_path(E, "degree"))
        assert chk.applicable
        assert abs(chk.slack) <= 1e-9 * (1 + chk.rhs), (E, chk.slack)


def test_kohler_jobin_modified_star_strict():
    chk = kohler_jobin_modified(make_star(5, "degree"))
    assert chk.applicable and chk.satisfied and chk.slack > 0.1


def test_kohler_jobin_classical():
    single = kohler_jobin_classical(make_path(1, "degree"))
    assert abs(single.slack) <= 1e-9
    e4 = kohler_jobin_classical(make_path(4, "degree"))
    expected = (4 * 7 * 9 / 3.0) ** (2.0 / 3.0) * (1.0 - np.cos(np.pi / 8.0))
    assert e4.lhs == pytest.approx(expected, rel=1e-9)
    assert e4.satisfied
    gated = kohler_jobin_classical(make_star(3, "degree", 1.0, 3.0))
    assert not gated.applicable  # p != 2


def test_kohler_jobin_classical_unit():
    single = kohler_jobin_classical_unit(make_path(1))
    assert abs(single.slack) <= 1e-9
    star = kohler_jobin_classical_unit(make_star(4))
    assert star.applicable and star.satisfied


def test_normalized_saint_venant():
    for spec in (make_path(4, "degree"), make_star(4, "degree"), make_complete(4, "degree")):
        chk = normalized_saint_venant(spec)
        assert chk.applicable and chk.satisfied, (chk.lhs, chk.rhs)
    assert not normalized_saint_venant(make_path(3)).applicable


def test_check_all_path_report():
    report = check_all(make_path(3))
    assert tuple(c.id for c in report.checks) == ALL_IDS
    assert not report.violations
    assert not report.inconclusive
    sv = {c.id: c for c in report.checks}["saint_venant_p2_unit"]
    assert abs(sv.slack) <= 1e-9 * (1 + sv.rhs)
    assert report.summary["eta"] == 1.0
    assert report.summary["m_unit"] and report.summary["b_standard"]


def test_check_all_gates_kohler_jobin_on_p():
    report = check_all(make_star(3, "degree", 1.0, 3.0))
    by_id = {c.id: c for c in report.checks}
    assert not by_id["kohler_jobin_modified"].applicable
    assert "p = 2" in by_id["kohler_jobin_modified"].reason
    assert not report.violations


def test_check_all_every_bound_appears_once():
    for spec in (make_path(2), make_star(2, "degree"), random_general_spec(0)):
        report = check_all(spec)
        ids = [c.id for c in report.checks]
        assert len(ids) == len(set(ids)) == len(ALL_IDS)
        for c in report.checks:
            if not c.applicable:
                assert c.reason


def test_check_all_neumann_spec():
    spec = random_general_spec(21, no_dirichlet=True)
    report = check_all(spec)
    by_id = {c.id: c for c in report.checks}
    assert by_id["polya_szego_product"].applicable
    assert by_id["symmetrization_upper"].applicable
    assert not by_id["saint_venant_general"].applicable
    assert not report.violations


def test_check_all_disconnected_graph_completes():
    g = build_graph(
        [("a", 1, 0), ("b", 1, 0), ("c", 1, 0), ("d", 1, 0)],
        [("a", "b", 1), ("c", "d", 1)],
    )
    report = check_all(ProblemSpec(g, frozenset({"a"}), 2.0))
    assert len(report.checks) == len(ALL_IDS)
    assert not report.violations
    by_id = {c.id: c for c in report.checks}
    assert not by_id["saint_venant_general"].applicable
    # torsion is unbounded on the stranded component; dependent checks must
    # surface that as inconclusive, not as an exception
    assert by_id["landscape_lower"].inconclusive


def test_report_serialization():
    report = check_all(make_path(2))
    d = report.to_dict()
    assert d["violations"] == 0
    assert len(d["checks"]) == len(ALL_IDS)
    md = report.to_markdown()
    assert md.count("\n") == len(ALL_IDS) + 1
    assert "saint_venant_general" in md


def test_saint_venant_triangle_sweep():
    # 1000 seeded weighted triangles with one Dirichlet vertex
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        w = rng.uniform(0.25, 4.0, size=3)
        m = rng.uniform(0.25, 4.0, size=3)
        g = build_graph(
            [("a", m[0], 0.0), ("b", m[1], 0.0), ("c", m[2], 0.0)],
            [("a", "b", w[0]), ("b", "c", w[1]), ("a", "c", w[2])],
        )
        spec = ProblemSpec(g, frozenset({"a"}), 2.0)
        chk = saint_venant_general(spec)
        assert chk.applicable and chk.satisfied, (w, m, chk.slack)


def test_inradius_lower_random_tree_sweep():
    # 500 seeded random trees: both tree and (where applicable) path forms
    for seed in range(500):
        rng = np.random.default_rng(seed + 41_000)
        size = int(rng.integers(2, 9))
        records = [("t0", float(rng.uniform(0.5, 2.0)), 0.0)]
        edges = []
        for j in range(1, size):
            parent = int(rng.integers(0, j))
            records.append((f"t{j}", float(rng.uniform(0.5, 2.0)), 0.0))
            edges.append((f"t{parent}", f"t{j}", float(rng.uniform(0.5, 2.0))))
        p = float(rng.choice([1.5, 2.0, 3.0]))
        spec = ProblemSpec(build_graph(records, edges), frozenset({"t0"}), p)
        tree = tree_inradius_lower(spec)
        assert tree.applicable and tree.satisfied, (seed, tree.slack)
        path = path_inradius_lower(spec)
        if path.applicable:
            assert path.satisfied, (seed, path.slack)


def test_figure_products_increase_toward_limits():
    from torsio.cli import figure4_rows

    rows = figure4_rows(50)
    for col in ("kj_path_unit", "kj_path_deg"):
        vals = [row[col] for row in rows]
        assert all(a < b for a, b in zip(vals, vals[1:])), col
    lim_deg = 2.0 ** (-1.0 / 3.0) * (np.pi / 12.0 ** (1.0 / 3.0)) ** 2
    lim_unit = (np.pi / 24.0 ** (1.0 / 3.0)) ** 2
    assert rows[-1]["kj_path_deg"] < lim_deg
    assert rows[-1]["kj_path_unit"] < lim_unit
    # star products keep growing past the path limits
    assert rows[-1]["kj_star_deg"] > lim_deg
    assert rows[-1]["kj_star_unit"] > lim_unit


def test_lambda1_consistency_with_fiedler_check():
    g = make_complete(5).graph
    assert lambda1_p2(g) == pytest.approx(5.0, abs=1e-10)
    chk = fiedler_neumann_p2(make_complete(5))
    assert chk.lhs == pytest.approx(5.0, abs=1e-10)
