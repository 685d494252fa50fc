#include <random>

#include "aimspec/polyrat.hpp"
#include "doctest.h"

using namespace aimspec;
using Q = mpq_class;
using PQ = Poly<Q>;

namespace {

PQ random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> deg(0, 5), num(-9, 9), den(1, 7);
  std::vector<Q> c(deg(rng) + 1);
  for (auto& x : c) {
    x = Q(num(rng), den(rng));
    x.canonicalize();
  }
  return PQ(c);
}

}  // namespace

TEST_CASE("canonical form strips trailing zeros") {
  PQ p{Q(1), Q(2), Q(0), Q(0)};
  CHECK(p.degree() == 1);
  CHECK(p.size() == 2);
  PQ z{Q(0), Q(0)};
  CHECK(z.is_zero());
  CHECK(z.degree() == -1);
  CHECK(z.coeffs().empty());
}

TEST_CASE("poly_arith examples") {
  PQ xp1{Q(1), Q(1)}, xm1{Q(-1), Q(1)};
  CHECK(poly_arith(xp1, xm1, PolyOp::mul) == PQ{Q(-1), Q(0), Q(1)});
  CHECK(poly_arith(xp1, PQ(), PolyOp::add) == xp1);
  PQ a{Q(3), Q(0), Q(2)}, b{Q(4), Q(1)};
  CHECK(poly_arith(a, b, PolyOp::mul) == PQ{Q(12), Q(3), Q(8), Q(2)});
  CHECK(poly_arith(a, a, PolyOp::sub).is_zero());
}

TEST_CASE("poly_derivative examples") {
  CHECK(poly_derivative(PQ{Q(0), Q(0), Q(1)}) == PQ{Q(0), Q(2)});
  CHECK(poly_derivative(PQ::constant(Q(7))).is_zero());
  CHECK(poly_derivative(PQ{Q(0), Q(-1), Q(0), Q(3)}) == PQ{Q(-1), Q(0), Q(9)});
}

TEST_CASE("rat_derivative examples") {
  RationalFn<Q> inv(PQ{Q(1)}, PQ{Q(0), Q(1)});
  auto d = rat_derivative(inv);
  // -1/x^2, compared by cross multiplication.
  CHECK(d.num() * PQ{Q(0), Q(0), Q(1)} == PQ{Q(-1)} * d.den());

  RationalFn<Q> f(PQ{Q(0), Q(1)}, PQ{Q(1), Q(1)});
  auto df = rat_derivative(f);
  PQ onepx2{Q(1), Q(2), Q(1)};
  CHECK(df.num() * onepx2 == PQ{Q(1)} * df.den());

  RationalFn<Q> c(PQ{Q(5)}, PQ{Q(2), Q(3)});
  auto dc = rat_derivative(c);
  CHECK(dc.num().is_zero() == false);
  CHECK(rat_eval(dc, Q(1)) != 0);  // 5/(2+3x) is not constant
  RationalFn<Q> k(PQ{Q(4)});
  auto dk = rat_derivative(k);
  CHECK(dk.num().is_zero());
  CHECK(dk.den() == PQ{Q(1)} * PQ{Q(1)});
}

TEST_CASE("rat_eval examples") {
  RationalFn<double> f(Poly<double>{1.0, 0.0, 1.0}, Poly<double>{-2.0, 1.0});
  CHECK(rat_eval(f, 3.0) == doctest::Approx(10.0));
  RationalFn<double> g(Poly<double>{-1.0, 1.0}, Poly<double>{3.0, 1.0});
  CHECK(rat_eval(g, 1.0) == 0.0);
  RationalFn<double> inv(Poly<double>{1.0}, Poly<double>{0.0, 1.0});
  CHECK_THROWS_AS(rat_eval(inv, 0.0), PoleError);
  RationalFn<Q> invq(PQ{Q(1)}, PQ{Q(0), Q(1)});
  CHECK_THROWS_AS(rat_eval(invq, Q(0)), PoleError);
}

TEST_CASE("zero denominator is rejected") {
  CHECK_THROWS_AS(RationalFn<double>(Poly<double>{1.0}, Poly<double>{}), ParameterError);
}

TEST_CASE("exact arithmetic laws on random polynomials") {
  std::mt19937 rng(20240611);
  for (int t = 0; t < 200; ++t) {
    PQ a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * b == b * a);
    CHECK(a + b == b + a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a * b).derivative() == a.derivative() * b + a * b.derivative());
  }
}

TEST_CASE("quotient rule keeps the squared denominator") {
  std::mt19937 rng(7);
  for (int t = 0; t < 50; ++t) {
    PQ n = random_poly(rng), d = random_poly(rng);
    if (d.is_zero()) continue;
    RationalFn<Q> f(n, d);
    CHECK(f.derivative().den() == d * d);
  }
}
