import itertools

import numpy as np
import pytest

import codes.etgrs as etgrs
from codes.etgrs import (PATH_AB0, PATH_H0, ConditionReport, amds_check, build_params, build_template,
                         check, deep_hole_check, delta_j, dual_schur_certificate, encode, extension_vector,
                         generator_g, generator_g1, grs_square_dimension, mds_check, predicted_deep_hole,
                         s_poly, scan, schur_square_certificate)
from codes.linear_code import (CodeClass, LinearCode, class_from_distance, classify_by_columns, extend_code,
                               grs_code, grs_dual_multipliers, puncture, tgrs_generator)
from gf.field import make_field, parse_element, parse_elements, parse_field_description
from lab_errors import BudgetExceeded, ParameterError, PreconditionError


# ---------------- Parameters ----------------
def test_build_params_example(q11_params):
    assert (q11_params.n, q11_params.k, q11_params.h) == (6, 3, 1)
    assert int(q11_params.eta) == 4 and int(q11_params.delta) == 7


def test_hook_must_stay_below_k_minus_one(gf11):
    with pytest.raises(ParameterError):
        build_params(gf11, 6, 3, 2, range(6), None, 4, 7)


def test_length_cannot_exceed_q(gf7):
    with pytest.raises(ParameterError):
        build_params(gf7, 8, 3, 1, range(8), None, 1, 1)


def test_every_violation_is_listed(gf7):
    with pytest.raises(ParameterError) as excinfo:
        build_params(gf7, 5, 3, 2, [0, 1, 1, 2, 3], None, 0, 0)
    assert len(excinfo.value.violations) == 4


# ---------------- Constructions ----------------
def test_generator_layout(q11_params):
    G = generator_g(q11_params)
    assert G.shape == (3, 8)
    assert [int(x) for x in G[0, 6:]] == [0, 0]
    assert [int(x) for x in G[1, 6:]] == [1, 1]
    assert [int(x) for x in G[2, 6:]] == [0, 7]
    # row h carries alpha^h + eta alpha^(k+1): 2 + 4 * 16 at alpha = 2
    assert int(G[1, 2]) == (2 + 4 * 16) % 11


def test_twist_sits_in_first_row_for_h0(gf13):
    P = build_params(gf13, 6, 3, 0, [1, 2, 3, 4, 5, 6], None, 2, 3)
    G = generator_g(P)
    assert int(G[0, 1]) == (1 + 2 * 2 ** 4) % 13
    assert [int(x) for x in G[0, 6:]] == [1, 1]


def test_generator_has_full_rank(random_params, rng):
    for q in (5, 7, 8, 11, 13):
        F = make_field(*{8: (2, 3)}.get(q, (q, 1)))
        P = random_params(rng, F)
        assert np.linalg.matrix_rank(generator_g(P)) == P.k


def test_g1_is_the_puncture(q11_params):
    G, G1 = generator_g(q11_params), generator_g1(q11_params)
    assert np.all(G1 == G[:, :-1])
    assert LinearCode(G1).same_code(puncture(LinearCode(G), q11_params.n + 1))


def test_extension_identity(random_params, rng):
    for _ in range(200):
        q = rng.choice((5, 7, 8, 11, 13))
        F = make_field(*{8: (2, 3)}.get(q, (q, 1)))
        P = random_params(rng, F)
        extended = extend_code(LinearCode(generator_g1(P)), extension_vector(P))
        assert extended.same_code(LinearCode(generator_g(P)))


def test_extension_vector_vanishes_at_zero_node(q11_params):
    e = extension_vector(q11_params)
    assert e[0] == 0
    assert e.size == q11_params.n + 1


def test_extension_tail_by_hand(q11_params):
    # e_7 = 1 + delta eta (e_2 - e_1^2) with e_1 = 15, e_2 = 85 over GF(11)
    assert int(extension_vector(q11_params)[6]) == 8


def test_extension_vector_with_unit_multipliers(gf13):
    P = build_params(gf13, 5, 3, 1, [1, 2, 3, 4, 5], None, 2, 5)
    u = grs_dual_multipliers(P.alpha)
    assert np.all(extension_vector(P)[:5] == P.delta * P.alpha ** 2 * u)


def test_twist_two_matches_the_alpha_block(random_params, rng):
    for q in (7, 8, 11, 13):
        F = make_field(*{8: (2, 3)}.get(q, (q, 1)))
        P = random_params(rng, F)
        G = tgrs_generator(P.alpha, P.v, P.k, 2, P.h, P.eta)
        assert np.all(G == generator_g(P)[:, :P.n])


def test_encode_matches_generator(q11_params, rng):
    G = generator_g(q11_params)
    for _ in range(20):
        coeffs = [rng.randrange(11) for _ in range(3)]
        assert np.all(encode(q11_params, coeffs) == q11_params.field.vector(coeffs) @ G)


# ---------------- Symmetric polynomials ----------------
def test_s_poly_by_hand(gf7):
    vals = gf7.vector([1, 2, 3])
    assert int(s_poly(0, vals)) == 1
    assert [int(s_poly(r, vals)) for r in (1, 2, 3)] == [1, 4, 1]
    assert int(s_poly(4, vals)) == 0
    assert int(s_poly(-1, vals)) == 0


def test_pascal_recurrence(gf13, rng):
    for _ in range(1000):
        size = rng.randint(1, 6)
        values = rng.sample(range(13), size + 1)
        E, beta = gf13.vector(values[:-1]), gf13(values[-1])
        union = gf13.vector(values)
        r = rng.randint(0, size + 2)
        assert s_poly(r, union) == s_poly(r, E) - beta * s_poly(r - 1, E)


def test_delta_specialisation(gf7):
    J = gf7.vector([1, 2])
    s1, s2 = s_poly(1, J), s_poly(2, J)
    assert delta_j(J, 3, 1) == s1 * (s1 * s1 - s2) - s1 * s2


def test_delta_is_symmetric(gf13):
    values = [2, 5, 7, 11]
    expected = delta_j(gf13.vector(values), 5, 1)
    for perm in itertools.permutations(values):
        assert delta_j(gf13.vector(perm), 5, 1) == expected


def test_delta_size_mismatch(gf7):
    with pytest.raises(ParameterError):
        delta_j(gf7.vector([1, 2, 3]), 3, 1)


# ---------------- MDS / AMDS criteria ----------------
def test_mds_example(q11_params):
    report = mds_check(q11_params)
    assert report.verdict
    assert all(c.holds and c.witness is None for c in report.conditions)


def test_h0_example_uses_corollary_path():
    F = make_field(19)
    P = build_params(F, 8, 5, 0, [3, 4, 5, 6, 13, 14, 15, 16], None, 15, 6)
    report = mds_check(P)
    assert report.verdict
    assert report.path == PATH_H0


def test_failed_condition_carries_witness(q11_template):
    report = mds_check(q11_template.params(1, 1))
    assert not report.verdict
    failing = [c for c in report.conditions if not c.holds]
    assert failing and all(isinstance(c.witness, tuple) for c in failing)
    assert report.first_failing() == failing[0].cid


@pytest.mark.slow
@pytest.mark.parametrize("template_name", ["q11_template", "q5_template"])
def test_criteria_match_column_oracle(template_name, request):
    template = request.getfixturevalue(template_name)
    for eta in template.field.units():
        for delta in template.field.units():
            P = template.params(eta, delta)
            code_class = classify_by_columns(LinearCode(generator_g(P)))
            assert mds_check(P).verdict == (code_class == CodeClass.MDS)
            assert amds_check(P).verdict == (code_class == CodeClass.AMDS)


def test_q11_grid_matches_min_distance_on_samples(q11_template):
    for eta, delta in ((4, 7), (1, 1), (4, 6), (10, 7)):
        P = q11_template.params(eta, delta)
        d = LinearCode(generator_g(P)).distance().d
        assert mds_check(P).verdict == (d == P.n + 2 - P.k + 1)


@pytest.mark.slow
@pytest.mark.parametrize("template_name", ["q11_template", "q5_template"])
def test_criteria_match_min_distance(template_name, request):
    template = request.getfixturevalue(template_name)
    length = template.n + 2
    for eta in template.field.units():
        for delta in template.field.units():
            P = template.params(eta, delta)
            d = LinearCode(generator_g(P)).distance().d
            code_class = class_from_distance(length, P.k, d)
            assert mds_check(P).verdict == (code_class == CodeClass.MDS)
            assert amds_check(P).verdict == (code_class == CodeClass.AMDS)


def test_amds_examples(q5_template):
    assert amds_check(q5_template.params(1, 1)).verdict
    P = build_params(make_field(7), 5, 3, 0, [2, 3, 4, 5, 6], None, 2, 1)
    assert amds_check(P).verdict
    assert amds_check(P).path == PATH_H0


def test_mds_excludes_amds(q11_params):
    assert not amds_check(q11_params).verdict


# ---------------- Deep holes ----------------
def test_deep_hole_example(gf13):
    P = build_params(gf13, 6, 3, 1, [1, 2, 3, 7, 8, 9], None, 9, 2)
    report = deep_hole_check(P, 2, 7)
    assert report.verdict
    assert report.radius == 5
    assert [int(x) for x in report.hole] == [1, 8, 1, 5, 5, 1, 2, 7]


def test_deep_hole_in_gf8(gf8):
    alpha = parse_elements(gf8, "g^0,g^1,g^3,g^4,g^5,g^6,0")
    P = build_params(gf8, 7, 5, 0, alpha, None, gf8.gen ** 5, gf8.one)
    report = deep_hole_check(P, gf8.gen ** 3, gf8.gen ** 2)
    assert report.verdict and report.radius == 4


def test_check_dispatches_to_deep_holes(gf13):
    P = build_params(gf13, 6, 3, 1, [1, 2, 3, 7, 8, 9], None, 9, 2)
    report = check(P, "deep-hole", 2, 7)
    assert report.target == "deep-hole" and report.verdict


def test_zero_coordinates_use_corollary(gf13):
    P = build_params(gf13, 6, 3, 1, [1, 2, 3, 7, 8, 9], None, 9, 2)
    report = deep_hole_check(P, 0, 0)
    assert report.path == PATH_AB0
    assert [int(x) for x in predicted_deep_hole(P, 0, 0)[6:]] == [0, 0]


def test_deep_hole_needs_mds_or_amds(q11_params, monkeypatch):
    refused = ConditionReport("mds", False, [])
    monkeypatch.setattr(etgrs, "mds_check", lambda P: refused)
    monkeypatch.setattr(etgrs, "amds_check", lambda P: refused)
    with pytest.raises(PreconditionError):
        deep_hole_check(q11_params, 0, 0)


# ---------------- Certificates ----------------
@pytest.mark.parametrize("field, n, k, h, alpha, eta, delta", [
    ("11", 6, 3, 1, "0,1,2,3,4,5", "4", "7"),
    ("16", 7, 4, 2, "0,g^1,g^2,g^4,g^6,g^7,g^13", "g^1", "g^7"),
    ("7", 5, 3, 0, "2,3,4,5,6", "5", "2"),
    ("5", 5, 3, 1, "0,1,2,3,4", "1", "1"),
])
def test_schur_certificate_on_published_codes(field, n, k, h, alpha, eta, delta):
    F = parse_field_description(field)
    P = build_params(F, n, k, h, parse_elements(F, alpha), None, parse_element(F, eta), parse_element(F, delta))
    certificate = schur_square_certificate(P)
    assert certificate.applicable and certificate.valid
    assert certificate.dimension >= 2 * k


def test_schur_certificate_outside_window(gf13):
    P = build_params(gf13, 8, 5, 0, range(1, 9), None, 2, 3)
    assert not schur_square_certificate(P).applicable


def test_grs_squares_have_dimension_2k_minus_1(gf13, rng):
    for _ in range(20):
        n = rng.randint(4, 13)
        k = rng.randint(2, (n + 1) // 2)
        alpha = gf13.vector(rng.sample(range(13), n))
        v = gf13.vector([rng.randrange(1, 13) for _ in range(n)])
        assert grs_square_dimension(grs_code(alpha, v, k)) == 2 * k - 1


def test_dual_certificate(gf13, rng):
    for _ in range(20):
        alpha = rng.sample(range(13), 9)
        v = [rng.randrange(1, 13) for _ in range(9)]
        P = build_params(gf13, 9, 6, rng.randint(0, 4), alpha, v, rng.randrange(1, 13), rng.randrange(1, 13))
        certificate = dual_schur_certificate(P)
        assert certificate.applicable and certificate.valid
        assert certificate.position == P.n
        assert certificate.value == -(P.eta * P.eta)


def test_dual_certificate_needs_k_at_most_n_minus_3(gf13):
    P = build_params(gf13, 8, 6, 1, range(8), None, 2, 3)
    assert not dual_schur_certificate(P).applicable


# ---------------- Scans ----------------
def test_scan_q11(q11_template):
    result = scan(q11_template, "mds", cross_validate=True)
    assert result.scanned == 100
    assert [(int(h.eta), int(h.delta)) for h in result.hits] == [(4, 7)]
    assert result.cross_checked == 100


def test_scan_q5_amds(q5_template):
    result = scan(q5_template, "amds", cross_validate=True)
    found = sorted((int(h.eta), int(h.delta)) for h in result.hits)
    assert found == [(1, 1), (1, 2), (1, 4), (2, 2), (2, 3), (2, 4),
                     (3, 1), (3, 2), (3, 3), (4, 1), (4, 3), (4, 4)]


def test_scan_order_is_independent_of_workers(q5_template):
    one = scan(q5_template, "amds", workers=1)
    many = scan(q5_template, "amds", workers=3)
    assert [(int(h.eta), int(h.delta)) for h in one.hits] == [(int(h.eta), int(h.delta)) for h in many.hits]


def test_hits_follow_generator_powers(q5_template):
    result = scan(q5_template, "amds")
    logs = [(int(h.eta.log()), int(h.delta.log())) for h in result.hits]
    assert logs == sorted(logs)


@pytest.mark.slow
def test_scan_q7_amds_count(gf7):
    template = build_template(gf7, 5, 3, 0, [2, 3, 4, 5, 6])
    assert len(scan(template, "amds", cross_validate=True).hits) == 25


def test_scan_rejects_unknown_target(q11_template):
    with pytest.raises(ParameterError):
        scan(q11_template, "nmds")


def test_scan_pair_budget(q11_template, monkeypatch):
    monkeypatch.setattr(etgrs, "PAIR_BUDGET", 99)
    with pytest.raises(BudgetExceeded):
        scan(q11_template, "mds")


def test_subset_tables_are_shared_and_bounded(q11_template, q11_params):
    assert etgrs.tables_for(q11_template) is etgrs.tables_for(q11_params.template)
    assert etgrs._cached_tables.cache_info().maxsize == etgrs.TABLES_CACHE_SIZE
