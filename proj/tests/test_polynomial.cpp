#include <catch2/catch_amalgamated.hpp>

#include <chowforms/polynomial.hpp>
#include <chowforms/rng.hpp>

using namespace chowforms;

namespace {

using QPoly = SparsePolynomial<RationalField>;

const RationalField Q;

QPoly xvar(const OrderPtr& o, int k) { return QPoly::variable(Q, o, var_x(k)); }
QPoly uvar(const OrderPtr& o, int i, int j) { return QPoly::variable(Q, o, var_u(i, j)); }

}  // namespace

TEST_CASE("graded lex order prefers higher total degree, then lex position") {
    const OrderPtr o = x_ring(2);
    const QPoly p = xvar(o, 1) + xvar(o, 2) * xvar(o, 2);
    // X2^2 beats X1 on total degree.
    Monomial lead = p.lead_monomial();
    CHECK(lead.deg == 2);
    CHECK(lead.e[1] == 2);
    CHECK(p.lead_coeff() == Rational(1));

    // Same degree: the earlier position with the larger exponent wins.
    const QPoly q = xvar(o, 1) * xvar(o, 2) * 3 - xvar(o, 1) * xvar(o, 1) * 5;
    CHECK(q.lead_coeff() == Rational(-5));
    CHECK(q.lead_monomial().e[0] == 2);
}

TEST_CASE("block monomials order by the most significant block") {
    const OrderPtr o = chow_ring(1, 1);
    const QPoly p = uvar(o, 0, 0) * uvar(o, 0, 0) * uvar(o, 1, 1) * uvar(o, 1, 1);
    CHECK(p.lead_monomial().deg == 4);
    CHECK(p.term_count() == 1);
    CHECK(p.lead_coeff() == Rational(1));
}

TEST_CASE("arithmetic keeps the no-zero-term invariant") {
    const OrderPtr o = x_ring(2);
    const QPoly a = xvar(o, 1) + xvar(o, 2);
    const QPoly b = xvar(o, 1) - xvar(o, 2);
    CHECK((a + b).term_count() == 1);
    CHECK((a - a).is_zero());
    const QPoly prod = a * b;
    CHECK(prod.term_count() == 2);  // X1^2 - X2^2
    CHECK(prod.degree_in(var_x(1)) == 2);
    CHECK((a * QPoly::zero(Q, o)).is_zero());
}

TEST_CASE("exact division") {
    const OrderPtr o = chow_ring(1, 0);
    const QPoly u0 = uvar(o, 0, 0), u1 = uvar(o, 0, 1);
    CHECK(exact_div(u0 * u0 - u1 * u1, u0 + u1) == u0 - u1);
    const QPoly p = u0 * u0 * 7 - u1 * 3;
    CHECK(exact_div(p, QPoly::from_int(Q, o, 1)) == p);
    CHECK(exact_div(p, QPoly::from_int(Q, o, 2)) == p.scaled(Rational(1, 2)));

    const OrderPtr ox = x_ring(1);
    const QPoly x = xvar(ox, 1);
    CHECK_THROWS_AS(exact_div(x * x + 1, x), NotDivisibleError);
    CHECK_THROWS_AS(exact_div(x, QPoly::zero(Q, ox)), DivisionByZeroError);
}

TEST_CASE("exact division matches multiplication on random triples") {
    Rng rng(0xC0FFEE);
    const OrderPtr o = x_ring(3);
    auto random_poly = [&](int terms) {
        QPoly p(Q, o);
        for (int t = 0; t < terms; ++t) {
            Monomial m(o->size());
            for (std::size_t v = 0; v < 3; ++v) {
                m.e[v] = static_cast<std::int32_t>(rng.below(3));
                m.deg += m.e[v];
            }
            const long c = static_cast<long>(rng.below(9)) - 4;
            if (c != 0) p += QPoly::one_term(Q, o, m, Rational(c));
        }
        return p;
    };
    int checked = 0;
    for (int it = 0; it < 40; ++it) {
        const QPoly a = random_poly(4), b = random_poly(3);
        if (a.is_zero() || b.is_zero()) continue;
        CHECK(exact_div(a * b, b) == a);
        ++checked;
    }
    CHECK(checked > 25);
}

TEST_CASE("homogenize") {
    std::vector<Variable> vars{var_x(0), var_x(1), var_x(2)};
    const OrderPtr o = make_order(vars);
    const QPoly x0 = xvar(o, 0), x1 = xvar(o, 1), x2 = xvar(o, 2);
    CHECK((x1 * x1 - 1).homogenize(var_x(0), {var_x(1)}, 2) == x1 * x1 - x0 * x0);
    CHECK((x1 + x2).homogenize(var_x(0), {var_x(1), var_x(2)}, 1) == x1 + x2);
    CHECK_THROWS_AS((x1 * x1).homogenize(var_x(0), {var_x(1)}, 1), DegreeExceedsTargetError);

    // Constant in the homogenization variables picks up the full power.
    const OrderPtr ot = make_order(std::vector<Variable>{var_thom(), var_t(0), var_u(0, 1)});
    const QPoly u01 = QPoly::variable(Q, ot, var_u(0, 1));
    const QPoly tp = QPoly::variable(Q, ot, var_thom());
    CHECK((-u01).homogenize(var_thom(), {var_t(0)}, 1) == -(u01 * tp));
}

TEST_CASE("derivative") {
    const OrderPtr o = char_ring(1, 1);
    const QPoly u00 = QPoly::variable(Q, o, var_u(0, 0));
    const QPoly t0 = QPoly::variable(Q, o, var_t(0));
    const QPoly u11 = QPoly::variable(Q, o, var_u(1, 1));
    const QPoly u01 = QPoly::variable(Q, o, var_u(0, 1));
    const QPoly t1 = QPoly::variable(Q, o, var_t(1));
    CHECK((u00 * u00).derivative(var_u(0, 0)) == u00 * 2);
    CHECK(u01.derivative(var_u(0, 0)).is_zero());
    CHECK((t0 * u11 - u01 * t1).derivative(var_t(0)) == u11);
}

TEST_CASE("substitution") {
    const OrderPtr o = char_ring(1, 0);
    const QPoly u00 = QPoly::variable(Q, o, var_u(0, 0));
    const QPoly u01 = QPoly::variable(Q, o, var_u(0, 1));
    const QPoly t0 = QPoly::variable(Q, o, var_t(0));
    CHECK((u00 + u01 * 2).substitute(var_u(0, 0), u00 - t0) == u00 - t0 + u01 * 2);
    const QPoly p = u00 * u01 - t0;
    CHECK(p.map_into(o, {}) == p);
}

TEST_CASE("content and primitive part over the rationals") {
    const OrderPtr o = x_ring(1);
    const QPoly x = xvar(o, 1);

    auto [c1, p1] = content_and_primitive(x.scaled(Rational(3, 2)) + 3);
    CHECK(c1 == Rational(3, 2));
    CHECK(p1 == x + 2);

    const OrderPtr oc = chow_ring(1, 0);
    const QPoly u0 = uvar(oc, 0, 0), u1 = uvar(oc, 0, 1);
    auto [c2, p2] = content_and_primitive(u0 + u1.scaled(Rational(1, 2)));
    CHECK(c2 == Rational(1, 2));
    CHECK(p2 == u0 * 2 + u1);

    auto [c3, p3] = content_and_primitive(-x);
    CHECK(c3 == Rational(-1));
    CHECK(p3 == x);
    CHECK(is_integer_poly(p2));
}

TEST_CASE("height is ln of the cleared-denominator magnitude") {
    const OrderPtr o = x_ring(1);
    const QPoly x = xvar(o, 1);
    CHECK(poly_height(QPoly::from_int(Q, o, 7)) == Catch::Approx(std::log(7.0)));
    CHECK(poly_height(x.scaled(Rational(1, 2)) + 3) == Catch::Approx(std::log(6.0)));
    CHECK(poly_height(x - 1) == 0.0);
    CHECK_THROWS_AS(poly_height(QPoly::zero(Q, o)), ZeroPolynomialError);
}

TEST_CASE("reduction modulo p") {
    const OrderPtr o = x_ring(1);
    const QPoly x = xvar(o, 1);
    const PrimeField f3(3);

    const auto r = reduce_mod_p(x.scaled(Rational(1, 2)), f3);
    const auto x3 = SparsePolynomial<PrimeField>::variable(f3, o, var_x(1));
    CHECK(r == x3.scaled(2));

    CHECK(reduce_mod_p(x * 3, f3).is_zero());
    CHECK_THROWS_AS(reduce_mod_p(x.scaled(Rational(1, 3)), f3), NotPAdmissibleError);

    const PrimeField f5(5);
    CHECK(reduce_mod_p(x * 7 - 2, f5) == SparsePolynomial<PrimeField>::variable(f5, o, var_x(1)).scaled(2) +
                                             SparsePolynomial<PrimeField>::constant(f5, o, 3));
}

TEST_CASE("prime field arithmetic") {
    CHECK_THROWS_AS(PrimeField(2), EvenPrimeError);
    CHECK_THROWS_AS(PrimeField(9), BadPrimeModulusError);
    CHECK_THROWS_AS(PrimeField(1), BadPrimeModulusError);
    const PrimeField f(1000003);
    CHECK(f.mul(f.inv(7), 7) == 1);
    CHECK(f.from_int(-1) == 1000002);
    CHECK(f.sub(3, 5) == 1000001);
    const PrimeField big((1ULL << 61) - 1);  // largest supported modulus
    CHECK(big.mul(big.inv(123456789), 123456789) == 1);
}

TEST_CASE("coefficients in a variable reassemble the polynomial") {
    const OrderPtr o = x_ring(2);
    const QPoly x1 = xvar(o, 1), x2 = xvar(o, 2);
    const QPoly p = x1 * x1 * x2 + x1 * 3 - x2 * x2 + 1;
    const auto cs = p.coeffs_in(var_x(1));
    REQUIRE(cs.size() == 3);
    CHECK(QPoly::assemble(Q, o, var_x(1), cs) == p);
    CHECK(cs[0] == -(x2 * x2) + 1);
    CHECK(cs[2] == x2);
}

TEST_CASE("full evaluation") {
    const OrderPtr o = x_ring(2);
    const QPoly p = xvar(o, 1) * xvar(o, 2) * 2 - 3;
    std::map<Variable, Rational> at{{var_x(1), Rational(2)}, {var_x(2), Rational(5, 2)}};
    CHECK(p.evaluate_full(at) == Rational(7));
}

TEST_CASE("variable images across rings") {
    const OrderPtr src = x_ring(2);
    const OrderPtr dst = extend_order(x_ring(2), {var_t(0)});
    const QPoly p = xvar(src, 1) * xvar(src, 2) + xvar(src, 2);
    const QPoly t = QPoly::variable(Q, dst, var_t(0));
    const QPoly img = p.map_into(dst, {{var_x(2), t * t}});
    const QPoly x1 = QPoly::variable(Q, dst, var_x(1));
    CHECK(img == x1 * t * t + t * t);
    CHECK_THROWS(p.map_into(make_order({var_x(1)}), {}));
}
