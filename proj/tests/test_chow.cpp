#include <catch2/catch_amalgamated.hpp>

#include <chowforms/chow.hpp>

using namespace chowforms;

namespace {

using QPoly = SparsePolynomial<RationalField>;
using QChow = ChowForm<RationalField>;
const RationalField Q;

QPoly qp(const std::string& text, const OrderPtr& o) { return parse_polynomial(text, Q, o); }

QChow qchow(const std::string& text, int n, int r) {
    return make_chow(qp(text, chow_ring(n, r)), n, r);
}

// Swap blocks i and j of a Chow form and renormalize.
QChow swapped_blocks(const QChow& C, int bi, int bj) {
    std::map<Variable, QPoly> images;
    for (int j = 0; j <= C.n; ++j) {
        images.emplace(var_u(bi, j), QPoly::variable(Q, C.poly.order(), var_u(bj, j)));
        images.emplace(var_u(bj, j), QPoly::variable(Q, C.poly.order(), var_u(bi, j)));
    }
    return normalize_chow(make_chow(C.poly.map_into(C.poly.order(), images), C.n, C.r));
}

}  // namespace

TEST_CASE("chow form of explicit points") {
    const QChow one = chow_of_points(Q, 1, {{Rational(2)}});
    CHECK(one.poly == qp("U0_0 + 2*U0_1", chow_ring(1, 0)));
    CHECK(one.r == 0);
    CHECK(one.D == 1);

    const QChow none = chow_of_points(Q, 1, {});
    CHECK(none.is_empty());
    CHECK(none.poly.is_constant());

    const QChow two = chow_of_points(Q, 1, {{Rational(1)}, {Rational(-1)}});
    CHECK(two.poly == qp("U0_0^2 - U0_1^2", chow_ring(1, 0)));
    CHECK(two.D == 2);

    const QChow plane = chow_of_points(Q, 2, {{Rational(3), Rational(4)}});
    CHECK(plane.poly == qp("U0_0 + 3*U0_1 + 4*U0_2", chow_ring(2, 0)));

    CHECK_THROWS_AS(chow_of_points(Q, 1, {{Rational(1)}, {Rational(1)}}), DuplicatePointError);
}

TEST_CASE("chow form of the ambient space") {
    const QChow a1 = chow_ambient(Q, 1);
    CHECK(a1.poly == qp("U0_0*U1_1 - U0_1*U1_0", chow_ring(1, 1)));
    CHECK(a1.r == 1);
    CHECK(a1.D == 1);
    CHECK(is_normal_position(a1));

    const QChow a2 = chow_ambient(Q, 2);
    CHECK(a2.poly == qp("U0_0*U1_1*U2_2 - U0_0*U1_2*U2_1 - U0_1*U1_0*U2_2 "
                        "+ U0_1*U1_2*U2_0 + U0_2*U1_0*U2_1 - U0_2*U1_1*U2_0",
                        chow_ring(2, 2)));
    CHECK(is_normal_position(a2));
    CHECK(is_multi_homogeneous(a2));
    CHECK(monomial_bound_ok(a2));
}

TEST_CASE("normal position detection and normalization") {
    const QChow line = qchow("U0_0*U1_2 - U0_2*U1_0", 2, 1);  // the line X1 = 0
    CHECK(!is_normal_position(line));
    CHECK_THROWS_AS(normalize_chow(line), NotNormalPositionError);

    const QChow scaled = qchow("2*U0_0 + 2*U0_1", 1, 0);
    CHECK(normalize_chow(scaled).poly == qp("U0_0 + U0_1", chow_ring(1, 0)));
    CHECK(is_normal_position(chow_of_points(Q, 1, {{Rational(5)}})));
    CHECK(normalize_chow(chow_empty(Q, 1)).is_empty());
}

TEST_CASE("characteristic polynomial") {
    const QChow pt = qchow("U0_0 + 2*U0_1", 1, 0);
    CHECK(characteristic_polynomial(pt) == qp("T0 - U0_0 - 2*U0_1", char_ring(1, 0)));

    CHECK(characteristic_polynomial(chow_empty(Q, 1)) ==
          QPoly::from_int(Q, char_ring(1, -1), 1));

    const QPoly P = characteristic_polynomial(chow_ambient(Q, 1));
    CHECK(P == qp("T0*U1_1 - U0_0*U1_1 + U0_1*U1_0 - U0_1*T1", char_ring(1, 1)));
    // Leading term T0^D U1_1^D with coefficient 1.
    const OrderPtr cr = char_ring(1, 1);
    Monomial want(cr->size());
    want.e[static_cast<std::size_t>(cr->index_of(var_t(0)))] = 1;
    want.e[static_cast<std::size_t>(cr->index_of(var_u(1, 1)))] = 1;
    want.deg = 2;
    CHECK(P.lead_monomial() == want);
    CHECK(P.lead_coeff() == Rational(1));
}

TEST_CASE("union of chow forms") {
    const QChow p1 = qchow("U0_0 + U0_1", 1, 0);
    const QChow p2 = qchow("U0_0 + 2*U0_1", 1, 0);
    const QChow u = union_chow(p1, p2);
    CHECK(u.poly == qp("U0_0^2 + 3*U0_0*U0_1 + 2*U0_1^2", chow_ring(1, 0)));
    CHECK(u.D == 2);

    const QChow two = qchow("U0_0^2 - U0_1^2", 1, 0);
    CHECK(union_chow(two, two) == two);
    CHECK(union_chow(two, chow_empty(Q, 1)) == two);
    CHECK(union_chow(chow_empty(Q, 1), two) == two);

    // Overlapping unions keep each component once.
    const QChow a = union_chow(p1, p2);
    const QChow b = union_chow(p2, qchow("U0_0 - U0_1", 1, 0));
    const QChow ab = union_chow(a, b);
    CHECK(ab.D == 3);
    CHECK(chow_squarefree_ok(ab));
}

TEST_CASE("generic projection") {
    const QChow pt = qchow("U0_0 + 2*U0_1", 1, 0);
    CHECK(generic_projection_chow(pt) == qp("L0_1*X1 - 2*L0_1", projection_ring(1, 1)));
    CHECK(generic_projection_chow(chow_empty(Q, 1)).is_constant());
    CHECK(generic_projection_chow(chow_ambient(Q, 1)).is_zero());
}

TEST_CASE("equations recovered from a chow form") {
    const auto eqs = equations_from_chow(qchow("U0_0 + 2*U0_1", 1, 0));
    REQUIRE(eqs.size() == 1);
    CHECK(eqs[0] == qp("X1 - 2", x_ring(1)));

    const auto empty_eqs = equations_from_chow(chow_empty(Q, 1));
    REQUIRE(empty_eqs.size() == 1);
    CHECK(empty_eqs[0] == QPoly::from_int(Q, x_ring(1), 1));

    // The line X1 = 0 in the plane: every recovered equation vanishes on the
    // line and at least one survives off it.
    const auto line_eqs = equations_from_chow(qchow("U0_0*U1_2 - U0_2*U1_0", 2, 1));
    REQUIRE(!line_eqs.empty());
    for (const auto& on : {Rational(5), Rational(-3)}) {
        for (const auto& e : line_eqs) {
            CHECK(e.evaluate_full({{var_x(1), Rational(0)}, {var_x(2), on}}) == Rational(0));
        }
    }
    bool some_nonzero = false;
    for (const auto& e : line_eqs)
        if (e.evaluate_full({{var_x(1), Rational(1)}, {var_x(2), Rational(1)}}) != Rational(0))
            some_nonzero = true;
    CHECK(some_nonzero);
}

TEST_CASE("separating against a hypersurface") {
    const QChow C = qchow("U0_0^2 + 3*U0_0*U0_1 + 2*U0_1^2", 1, 0);  // points {1, 2}
    const OrderPtr xr = x_ring(1);

    auto [inside, outside] = separate_hypersurface_chow(C, qp("X1 - 1", xr));
    CHECK(inside.poly == qp("U0_0 + U0_1", chow_ring(1, 0)));
    CHECK(outside.poly == qp("U0_0 + 2*U0_1", chow_ring(1, 0)));
    CHECK(inside.D + outside.D == C.D);
    CHECK(union_chow(inside, outside) == normalize_chow(C));
    CHECK(monic_gcd(inside.poly, outside.poly).is_constant());

    auto [in2, out2] = separate_hypersurface_chow(C, qp("X1 - 3", xr));
    CHECK(in2.is_empty());
    CHECK(out2 == C);

    auto [in3, out3] = separate_hypersurface_chow(C, QPoly::from_int(Q, xr, 1));
    CHECK(in3.is_empty());
    CHECK(out3 == C);

    auto [in4, out4] = separate_hypersurface_chow(C, QPoly::zero(Q, xr));
    CHECK(in4 == C);
    CHECK(out4.is_empty());

    const auto both = separate_hypersurface_chow(chow_empty(Q, 1), qp("X1", xr));
    CHECK(both.first.is_empty());
    CHECK(both.second.is_empty());
}

TEST_CASE("separating dimension-1 sets against each other") {
    const QChow line = qchow("U0_0*U1_2 - U0_2*U1_0", 2, 1);  // X1 = 0

    const QChow origin = qchow("U0_0", 2, 0);
    auto [on, off] = separate_chow(origin, line);
    CHECK(on == origin);
    CHECK(off.is_empty());

    const QChow pt = qchow("U0_0 + U0_1", 2, 0);  // the point (1, 0)
    auto [on2, off2] = separate_chow(pt, line);
    CHECK(on2.is_empty());
    CHECK(off2 == pt);

    auto [on3, off3] = separate_chow(pt, chow_empty(Q, 2));
    CHECK(on3.is_empty());
    CHECK(off3 == pt);
}

TEST_CASE("pseudo companion matrices") {
    const OrderPtr tr = make_order({var_t(0)});
    const QPoly t = QPoly::variable(Q, tr, var_t(0));

    const auto m1 = pseudo_companion(t * t - 1, var_t(0));
    CHECK(m1.size() == 2);
    CHECK(m1.at(0, 0).is_zero());
    CHECK(m1.at(0, 1) == QPoly::from_int(Q, tr, 1));
    CHECK(m1.at(1, 0) == QPoly::from_int(Q, tr, 1));
    CHECK(m1.at(1, 1).is_zero());

    const auto m2 = pseudo_companion(t * t * 2 + 6, var_t(0));
    CHECK(m2.at(0, 1) == QPoly::from_int(Q, tr, -6));
    CHECK(m2.at(1, 0) == QPoly::from_int(Q, tr, 2));
    CHECK(m2.at(0, 0).is_zero());
    CHECK(m2.at(1, 1).is_zero());

    const auto m3 = pseudo_companion(t * 3 + 5, var_t(0));
    CHECK(m3.size() == 1);
    CHECK(m3.at(0, 0) == QPoly::from_int(Q, tr, -5));

    CHECK_THROWS_AS(pseudo_companion(QPoly::from_int(Q, tr, 4), var_t(0)),
                    ZeroLeadingCoefficientError);
}

TEST_CASE("degree-d chow form of the affine line") {
    const QChow amb = chow_ambient(Q, 1);
    const OrderPtr xr = x_ring(1);

    const auto quad = degree_d_chow_form(amb, qp("X1^2 - 1", xr));
    CHECK(quad.poly == qp("U0_0^2 - U0_1^2", chow_ring(1, 0)));
    CHECK(quad.source_d == 2);

    const auto lin = degree_d_chow_form(amb, qp("X1 - 2", xr));
    CHECK(lin.poly == qp("U0_0 + 2*U0_1", chow_ring(1, 0)));
    CHECK(lin.source_d == 1);

    // Every strategy computes the identical polynomial; the dense generic
    // block is the reference for the sparse default, and the modular
    // interpolation route must reproduce it bit for bit.
    for (const char* f : {"X1^2 - 1", "X1 - 2", "2*X1^3 - X1 + 5"}) {
        const auto ref = degree_d_chow_form(amb, qp(f, xr), DegreeDStrategy::SymbolicDense).poly;
        CHECK(degree_d_chow_form(amb, qp(f, xr)).poly == ref);
        CHECK(degree_d_chow_form(amb, qp(f, xr), DegreeDStrategy::SymbolicSparse).poly == ref);
        CHECK(degree_d_chow_form(amb, qp(f, xr), DegreeDStrategy::Interpolate).poly == ref);
    }

    // Normalization anchor: at F = X1^2 the value is U0_0^2, which is 1 at
    // the distinguished evaluation point U_0 = (1, 0).
    const auto anchor = degree_d_chow_form(amb, qp("X1^2", xr));
    CHECK(anchor.poly == qp("U0_0^2", chow_ring(1, 0)));
    CHECK(anchor.poly.evaluate_full({{var_u(0, 0), Rational(1)}, {var_u(0, 1), Rational(0)}}) ==
          Rational(1));
}

TEST_CASE("weak squarefree part") {
    const OrderPtr o = chow_ring(1, 0);
    const QPoly u0 = QPoly::variable(Q, o, var_u(0, 0));
    const QPoly u1 = QPoly::variable(Q, o, var_u(0, 1));
    CHECK(weak_squarefree_part(u1 * (u0 + u1) * (u0 + u1)) == u0 + u1);
    CHECK(weak_squarefree_part(u0 * u0 - u1 * u1) == u0 * u0 - u1 * u1);
    CHECK(weak_squarefree_part(QPoly::from_int(Q, o, 5)) == QPoly::from_int(Q, o, 1));
    CHECK_THROWS_AS(weak_squarefree_part(QPoly::zero(Q, o)), ZeroPolynomialError);
}

TEST_CASE("proper intersections with a hypersurface") {
    const QChow amb = chow_ambient(Q, 1);
    const OrderPtr xr = x_ring(1);
    CHECK(intersection_chow(amb, qp("X1 - 2", xr)).poly == qp("U0_0 + 2*U0_1", chow_ring(1, 0)));
    CHECK(intersection_chow(amb, qp("X1^2 - 1", xr)).poly == qp("U0_0^2 - U0_1^2", chow_ring(1, 0)));
    // Conjugate point pairs stay irreducible over the rationals.
    CHECK(intersection_chow(amb, qp("X1^2 + 1", xr)).poly == qp("U0_0^2 + U0_1^2", chow_ring(1, 0)));
    // Repeated roots collapse to multiplicity one.
    CHECK(intersection_chow(amb, qp("X1^2 - 2*X1 + 1", xr)).poly == qp("U0_0 + U0_1", chow_ring(1, 0)));
    CHECK(intersection_chow(amb, QPoly::from_int(Q, xr, 3)).is_empty());
    CHECK(intersection_chow(chow_empty(Q, 1), qp("X1", xr)).is_empty());
}

TEST_CASE("interpolation route agrees with the symbolic routes") {
    // The shape that drives the modular route in anger: a dimension-1 quadric
    // in 3-space cut by hypersurfaces of increasing degree.
    const QChow amb = chow_ambient(Q, 2);
    const OrderPtr xr = x_ring(2);
    const QChow conic = intersection_chow(amb, qp("X1^2 + X2^2 - 5", xr));
    REQUIRE(conic.r == 1);
    REQUIRE(conic.D == 2);
    for (const char* f : {"X1 - X2", "X1*X2 - 2", "X1^3 - X2 + 1", "3*X1^2*X2 + X2^2 - 7"}) {
        const auto sym = degree_d_chow_form(conic, qp(f, xr), DegreeDStrategy::SymbolicSparse);
        const auto mod = degree_d_chow_form(conic, qp(f, xr), DegreeDStrategy::Interpolate);
        CHECK(mod.poly == sym.poly);
        CHECK(mod.source_d == sym.source_d);
    }

    // A hypersurface containing the whole curve collapses the form to zero;
    // the modular route has to recognize that through its zero images.
    const auto zsym =
        degree_d_chow_form(conic, qp("X1^2 + X2^2 - 5", xr), DegreeDStrategy::SymbolicSparse);
    const auto zmod =
        degree_d_chow_form(conic, qp("X1^2 + X2^2 - 5", xr), DegreeDStrategy::Interpolate);
    CHECK(zsym.poly.is_zero());
    CHECK(zmod.poly == zsym.poly);

    // Rational coefficients: the removed contents are restored identically.
    const auto qsym = degree_d_chow_form(conic, qp("1/6*X1*X2 - 3/4", xr),
                                         DegreeDStrategy::SymbolicSparse);
    const auto qmod =
        degree_d_chow_form(conic, qp("1/6*X1*X2 - 3/4", xr), DegreeDStrategy::Interpolate);
    CHECK(qmod.poly == qsym.poly);

    const ChowForm<PrimeField> modamb = chow_ambient(PrimeField(11), 1);
    CHECK_THROWS_AS(degree_d_chow_form(modamb,
                                       SparsePolynomial<PrimeField>::variable(
                                           PrimeField(11), x_ring(1), var_x(1)),
                                       DegreeDStrategy::Interpolate),
                    InputError);
}

TEST_CASE("intersections match root enumeration over a small prime field") {
    const PrimeField f(11);
    using FPoly = SparsePolynomial<PrimeField>;
    const ChowForm<PrimeField> amb = chow_ambient(f, 1);
    const OrderPtr xr = x_ring(1);
    // Every monic squarefree split cubic: pick three distinct roots.
    const std::uint64_t roots[3] = {2, 5, 8};
    FPoly F = FPoly::from_int(f, xr, 1);
    const FPoly x = FPoly::variable(f, xr, var_x(1));
    for (auto rt : roots) F = F * (x - FPoly::constant(f, xr, rt));
    const auto got = intersection_chow(amb, F);
    const auto want = chow_of_points(f, 1, {{2}, {5}, {8}});
    CHECK(got.poly == want.poly);
    CHECK(got.D == 3);
}

TEST_CASE("kronecker parametrization of dimension-0 sets") {
    const OrderPtr tr = make_order({var_t(0)});
    const QChow two = qchow("U0_0^2 - U0_1^2", 1, 0);
    const auto k1 = kronecker_parametrization(two, {1});
    CHECK(k1.Q == qp("T0^2 - 1", tr));
    REQUIRE(k1.V.size() == 1);
    CHECK(k1.V[0] == QPoly::from_int(Q, tr, -2));

    const auto k2 = kronecker_parametrization(qchow("U0_0 + 2*U0_1", 1, 0), {0});
    CHECK(k2.Q == qp("T0", tr));
    CHECK(k2.V[0] == QPoly::from_int(Q, tr, 2));

    const auto k3 = kronecker_parametrization(qchow("U0_0", 1, 0), {1});
    CHECK(k3.Q == qp("T0", tr));
    CHECK(k3.V[0].is_zero());

    CHECK_THROWS_AS(kronecker_parametrization(two, {0}), DegenerateAlphaError);
}

TEST_CASE("kronecker coordinates reproduce rational solutions") {
    const QChow C = chow_of_points(Q, 1, {{Rational(2)}, {Rational(-3)}});
    const auto k = kronecker_parametrization(C, {1});
    const QPoly dQ = k.Q.derivative(var_t(0));
    // Roots of Q = (T + 2)(T - 3).
    for (const auto& [tau, want] : {std::pair{Rational(-2), Rational(2)},
                                    std::pair{Rational(3), Rational(-3)}}) {
        CHECK(k.Q.evaluate_full({{var_t(0), tau}}) == Rational(0));
        const Rational x = k.V[0].evaluate_full({{var_t(0), tau}}) /
                           dQ.evaluate_full({{var_t(0), tau}});
        CHECK(x == want);
    }
}

TEST_CASE("primitive representative") {
    const QChow half = qchow("U0_0 + 1/2*U0_1", 1, 0);
    CHECK(primitive_chow(half).poly == qp("2*U0_0 + U0_1", chow_ring(1, 0)));
    const QChow neg = qchow("-3*U0_0", 1, 0);
    CHECK(primitive_chow(neg).poly == qp("U0_0", chow_ring(1, 0)));
    const QChow already = qchow("U0_0^2 - U0_1^2", 1, 0);
    CHECK(primitive_chow(already) == already);
}

TEST_CASE("normalized forms are block-swap symmetric") {
    const QChow a1 = chow_ambient(Q, 1);
    CHECK(swapped_blocks(a1, 0, 1) == a1);
    const QChow a2 = chow_ambient(Q, 2);
    CHECK(swapped_blocks(a2, 0, 2) == a2);
    CHECK(swapped_blocks(a2, 1, 2) == a2);
}

TEST_CASE("chow forms survive a text round trip") {
    const QChow two = qchow("U0_0^2 - U0_1^2", 1, 0);
    CHECK(parse_chow(print_chow(two), Q) == two);
    const QChow amb = chow_ambient(Q, 2);
    CHECK(parse_chow(print_chow(amb), Q) == amb);
    const QChow none = chow_empty(Q, 3);
    CHECK(parse_chow(print_chow(none), Q) == none);
    CHECK(print_chow(none) == "chow{n=3, r=-1, D=0} 1");
}

TEST_CASE("hypersurface separation works over a prime field") {
    const PrimeField f(5);
    using FPoly = SparsePolynomial<PrimeField>;
    const OrderPtr cr = chow_ring(1, 0);
    const OrderPtr xr = x_ring(1);
    // Points {1, 2} over F_5.
    const FPoly pts = parse_polynomial("U0_0^2 + 3*U0_0*U0_1 + 2*U0_1^2", f, cr);
    const ChowForm<PrimeField> C = make_chow(pts, 1, 0);
    auto [inside, outside] = separate_hypersurface_chow(C, parse_polynomial("X1 - 1", f, xr));
    CHECK(inside.poly == parse_polynomial("U0_0 + U0_1", f, cr));
    CHECK(outside.poly == parse_polynomial("U0_0 + 2*U0_1", f, cr));
}
