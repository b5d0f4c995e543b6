#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "generators.hpp"
#include "it2fls/inference.hpp"
#include "it2fls/model.hpp"

using namespace it2fls;
using namespace it2fls::testing;

TEST_CASE("consequents") {
  SUBCASE("bias only") {
    ConsequentParams c{Matrix(2, 3), {3.0, -1.0}};
    const auto y = consequents(std::vector<double>{0.4, 9.0, -2.0}, c);
    CHECK(y == std::vector<double>{3.0, -1.0});
  }
  SUBCASE("dot product") {
    ConsequentParams c{Matrix(1, 2), {0.0}};
    c.a(0, 0) = 1.0;
    c.a(0, 1) = 2.0;
    CHECK(consequents(std::vector<double>{3.0, 4.0}, c)[0] == 11.0);
  }
  SUBCASE("random instance against a naive double loop") {
    Rng rng(5);
    ConsequentParams c{Matrix(4, 6), random_vector(rng, 4, -2, 2)};
    for (auto& v : c.a.values()) v = uniform(rng, -2, 2);
    const auto x = random_vector(rng, 6, -3, 3);
    const auto y = consequents(x, c);
    for (std::size_t p = 0; p < 4; ++p) {
      double acc = 0.0;
      for (std::size_t m = 0; m < 6; ++m) acc += c.a(p, m) * x[m];
      acc += c.a0[p];
      CHECK(y[p] == doctest::Approx(acc).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(consequents(std::vector<double>{1.0}, ConsequentParams{Matrix(1, 2), {0.0}}), ShapeMismatch);
}

TEST_CASE("KM type reduction examples") {
  SUBCASE("single rule") {
    FiringIntervals f{{0.3}, {0.9}};
    const std::vector<double> y{2.5};
    const auto km = km_type_reduce(f, y);
    CHECK(km.y_lower == 2.5);
    CHECK(km.y_upper == 2.5);
    CHECK_FALSE(km.degenerate);
  }
  SUBCASE("equal consequents pin the switch points whatever the firings") {
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
      const auto p = uniform_index(rng, 1, 5);
      const auto f = random_firings(rng, p);
      const std::vector<double> y(p, uniform(rng, -3.0, 3.0));
      const auto km = km_type_reduce(f, y);
      CHECK(km.y_lower == y[0]);
      CHECK(km.y_upper == y[0]);
      CHECK(km.switch_lower == p);
      CHECK(km.switch_upper == 0);
    }
  }
  SUBCASE("type-1 collapse") {
    FiringIntervals f{{0.2, 0.5, 0.9}, {0.2, 0.5, 0.9}};
    const std::vector<double> y{1.0, -2.0, 4.0};
    const double mean = (0.2 * 1.0 - 0.5 * 2.0 + 0.9 * 4.0) / 1.6;
    const auto km = km_type_reduce(f, y);
    CHECK(km.y_lower == doctest::Approx(mean).epsilon(1e-14));
    CHECK(km.y_upper == doctest::Approx(mean).epsilon(1e-14));
  }
  SUBCASE("symmetric three-rule instance (brute force over 2^3 assignments gives +-0.5)") {
    FiringIntervals f{{0.2, 0.2, 0.2}, {0.8, 0.8, 0.8}};
    const std::vector<double> y{-1.0, 0.0, 1.0};
    const auto km = km_type_reduce(f, y);
    CHECK(km.y_lower == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(km.y_upper == doctest::Approx(0.5).epsilon(1e-14));
    const auto bf = km_brute_force_oracle(f, y);
    CHECK(bf.y_lower == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(bf.y_upper == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("zero upper firing is degenerate") {
    FiringIntervals f{{0.0, 0.0}, {0.0, 0.0}};
    const std::vector<double> y{1.0, 2.0};
    const auto km = km_type_reduce(f, y);
    CHECK(km.degenerate);
    CHECK(std::isnan(km.y_lower));
    CHECK(km_brute_force_oracle(f, y).degenerate);
  }
  SUBCASE("zero lower firings are still reduced using the upper ones") {
    FiringIntervals f{{0.0, 0.0}, {0.5, 0.25}};
    const std::vector<double> y{1.0, 3.0};
    const auto km = km_type_reduce(f, y);
    const auto bf = km_brute_force_oracle(f, y);
    CHECK(km.y_lower == doctest::Approx(bf.y_lower));
    CHECK(km.y_upper == doctest::Approx(bf.y_upper));
    CHECK(km.y_lower == doctest::Approx(1.0));
    CHECK(km.y_upper == doctest::Approx(3.0));
  }
}

TEST_CASE("KM brute-force oracle") {
  SUBCASE("single rule") {
    const auto bf = km_brute_force_oracle(FiringIntervals{{0.1}, {0.7}}, std::vector<double>{-3.0});
    CHECK(bf.y_lower == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(bf.y_upper == doctest::Approx(-3.0).epsilon(1e-15));
  }
  SUBCASE("tied consequents") {
    Rng rng(2);
    const auto f = random_firings(rng, 6);
    const std::vector<double> y(6, 1.75);
    const auto bf = km_brute_force_oracle(f, y);
    CHECK(bf.y_lower == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(bf.y_upper == doctest::Approx(1.75).epsilon(1e-15));
    const auto km = km_type_reduce(f, y);
    CHECK(km.y_lower == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(km.y_upper == doctest::Approx(1.75).epsilon(1e-15));
  }
  SUBCASE("matches the switch-point scan on 1000 random instances") {
    Rng rng(17);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const auto p = uniform_index(rng, 1, 8);
      const auto f = random_firings(rng, p);
      const auto y = random_vector(rng, p, -10, 10);
      const auto km = km_type_reduce(f, y);
      const auto bf = km_brute_force_oracle(f, y);
      worst = std::max({worst, std::abs(km.y_lower - bf.y_lower), std::abs(km.y_upper - bf.y_upper)});
    }
    CHECK(worst < 1e-10);
  }
  CHECK_THROWS(km_brute_force_oracle(FiringIntervals{std::vector<double>(21, 0.5), std::vector<double>(21, 0.5)},
                                     std::vector<double>(21, 0.0)));
}

TEST_CASE("KM and WKM defuzzification") {
  CHECK(km_defuzz(-0.5, 0.5) == 0.0);
  CHECK(km_defuzz(1.0, 1.0) == 1.0);
  CHECK(km_defuzz(0.2, 0.8) == doctest::Approx(0.5));
  CHECK(wkm_defuzz(-0.5, 0.5, 1.0) == -0.5);
  CHECK(wkm_defuzz(-0.5, 0.5, 0.25) == doctest::Approx(0.25).epsilon(1e-15));
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double a = uniform(rng, -5, 5), b = uniform(rng, -5, 5);
    CHECK(wkm_defuzz(a, b, 0.5) == km_defuzz(a, b));
  }
}

TEST_CASE("NT output") {
  SUBCASE("hand-evaluated two-rule instance") {
    const auto pr = nt_output(FiringIntervals{{0.2, 0.4}, {0.6, 0.8}}, std::vector<double>{1.0, 2.0});
    CHECK(pr.y_crisp == doctest::Approx(1.6).epsilon(1e-14));
    CHECK(pr.y_lower == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pr.y_upper == doctest::Approx(2.2).epsilon(1e-14));
  }
  SUBCASE("type-1 collapse") {
    const auto pr = nt_output(FiringIntervals{{0.3, 0.6}, {0.3, 0.6}}, std::vector<double>{-1.0, 2.0});
    const double mean = (0.3 * -1.0 + 0.6 * 2.0) / 0.9;
    CHECK(pr.y_crisp == doctest::Approx(mean).epsilon(1e-14));
    CHECK(pr.y_lower == doctest::Approx(mean).epsilon(1e-14));
    CHECK(pr.y_upper == doctest::Approx(mean).epsilon(1e-14));
  }
  SUBCASE("constant consequents") {
    const FiringIntervals f{{0.1, 0.3, 0.2}, {0.5, 0.4, 0.9}};
    const double q = 2.5;
    const auto pr = nt_output(f, std::vector<double>(3, q));
    const double sl = 0.6, su = 1.8;
    CHECK(pr.y_crisp == doctest::Approx(q).epsilon(1e-14));
    CHECK(pr.y_lower == doctest::Approx(q * 2 * sl / (sl + su)).epsilon(1e-14));
    CHECK(pr.y_upper == doctest::Approx(q * 2 * su / (sl + su)).epsilon(1e-14));
  }
  CHECK(nt_output(FiringIntervals{{0.0}, {0.0}}, std::vector<double>{1.0}).degenerate);
}

TEST_CASE("WNT output") {
  SUBCASE("beta = 1 keeps only the lower firings") {
    const auto pr = wnt_output(FiringIntervals{{0.2, 0.4}, {0.6, 0.8}}, std::vector<double>{1.0, 2.0}, 1.0);
    CHECK(pr.y_crisp == doctest::Approx(1.0 / 0.6).epsilon(1e-14));
    CHECK(pr.y_upper == 0.0);
  }
  SUBCASE("beta = 0 keeps only the upper firings") {
    const auto pr = wnt_output(FiringIntervals{{0.2, 0.4}, {0.6, 0.8}}, std::vector<double>{1.0, 2.0}, 0.0);
    CHECK(pr.y_crisp == doctest::Approx((0.6 + 1.6) / 1.4).epsilon(1e-14));
    CHECK(pr.y_lower == 0.0);
  }
  SUBCASE("beta = 0.5 reproduces NT") {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
      const auto p = uniform_index(rng, 1, 7);
      const auto f = random_firings(rng, p);
      const auto y = random_vector(rng, p, -10, 10);
      const auto a = nt_output(f, y);
      const auto b = wnt_output(f, y, 0.5);
      CHECK(std::abs(a.y_crisp - b.y_crisp) <= 1e-14);
      CHECK(std::abs(a.y_lower - b.y_lower) <= 1e-14);
      CHECK(std::abs(a.y_upper - b.y_upper) <= 1e-14);
    }
  }
  CHECK(wnt_output(FiringIntervals{{0.0}, {0.5}}, std::vector<double>{1.0}, 1.0).degenerate);
}

TEST_CASE("predict composes firing, consequents and the CSCM") {
  SUBCASE("single rule at its center") {
    for (auto c : {Cscm::KM, Cscm::WKM, Cscm::NT, Cscm::WNT}) {
      FuzzySystem sys;
      sys.antecedents.centers = Matrix(1, 2, 0.5);
      sys.antecedents.sigma_upper = Matrix(1, 2, 1.0);
      sys.antecedents.sigma_lower = Matrix(1, 2, 0.6);
      sys.antecedents.heights = Matrix(1, 2, 0.8);
      sys.consequents = {Matrix(1, 2, 1.0), {0.25}};
      sys.cscm = {c, 0.5};
      const std::vector<double> x{0.5, 0.5};
      const double y1 = 0.5 + 0.5 + 0.25;
      const auto pr = predict(x, sys);
      CHECK(pr.y_crisp == doctest::Approx(y1).epsilon(1e-14));
    }
  }
  SUBCASE("KM and WKM(0.5) agree; KM brackets its crisp output") {
    Rng rng(21);
    for (int i = 0; i < 200; ++i) {
      const auto p = uniform_index(rng, 1, 6);
      const auto m = uniform_index(rng, 1, 5);
      auto km_model = random_model(rng, {p, m, FsType::HS, FiringMode::PROD, Cscm::KM});
      auto sys = km_model.system();
      const auto x = random_vector(rng, m, -1.5, 1.5);
      const auto a = predict(x, sys);
      sys.cscm = {Cscm::WKM, 0.5};
      const auto b = predict(x, sys);
      CHECK(a.y_crisp == b.y_crisp);
      CHECK(a.y_lower == b.y_lower);
      CHECK(a.y_upper == b.y_upper);
      CHECK(a.y_lower <= a.y_crisp);
      CHECK(a.y_crisp <= a.y_upper);
      const auto f = firing_intervals(x, sys.antecedents);
      const auto bf = km_brute_force_oracle(f, consequents(x, sys.consequents));
      CHECK(a.y_lower == doctest::Approx(bf.y_lower).epsilon(1e-12));
      CHECK(a.y_upper == doctest::Approx(bf.y_upper).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: KM bounds bracket every continuous firing choice") {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = uniform_index(rng, 1, 8);
    const auto f = random_firings(rng, p);
    const auto y = random_vector(rng, p, -10, 10);
    const auto km = km_type_reduce(f, y);
    for (int s = 0; s < 10; ++s) {
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        const double w = f.lower[i] + uniform(rng, 0, 1) * (f.upper[i] - f.lower[i]);
        num += w * y[i];
        den += w;
      }
      const double r = num / den;
      CHECK(r >= km.y_lower - 1e-12);
      CHECK(r <= km.y_upper + 1e-12);
    }
  }
}

TEST_CASE("property: KM is invariant under rule permutation") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = uniform_index(rng, 2, 8);
    const auto f = random_firings(rng, p);
    const auto y = random_vector(rng, p, -10, 10);
    std::vector<std::size_t> perm(p);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    FiringIntervals g{std::vector<double>(p), std::vector<double>(p)};
    std::vector<double> z(p);
    for (std::size_t i = 0; i < p; ++i) {
      g.lower[i] = f.lower[perm[i]];
      g.upper[i] = f.upper[perm[i]];
      z[i] = y[perm[i]];
    }
    const auto a = km_type_reduce(f, y);
    const auto b = km_type_reduce(g, z);
    CHECK(a.y_lower == doctest::Approx(b.y_lower).epsilon(1e-13));
    CHECK(a.y_upper == doctest::Approx(b.y_upper).epsilon(1e-13));
  }
}

TEST_CASE("property: NT / WNT midpoint identity and WKM affinity in beta") {
  Rng rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = uniform_index(rng, 1, 8);
    const auto f = random_firings(rng, p);
    const auto y = random_vector(rng, p, -10, 10);
    const double beta = uniform(rng, 0, 1);
    for (const auto& pr : {nt_output(f, y), wnt_output(f, y, beta)}) {
      CHECK(std::abs((pr.y_lower + pr.y_upper) / 2 - pr.y_crisp) <= 1e-12 * (1 + std::abs(pr.y_crisp)));
    }
    const auto km = km_type_reduce(f, y);
    const double h = 1e-3;
    const double slope = (wkm_defuzz(km.y_lower, km.y_upper, beta + h) -
                          wkm_defuzz(km.y_lower, km.y_upper, beta - h)) / (2 * h);
    CHECK(slope == doctest::Approx(km.y_lower - km.y_upper).epsilon(1e-8));
  }
}

TEST_CASE("property: type-1 collapse makes all CSCMs agree at beta = 0.5") {
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = uniform_index(rng, 1, 8);
    auto f = random_firings(rng, p);
    f.lower = f.upper;
    const auto y = random_vector(rng, p, -10, 10);
    const double ref = nt_output(f, y).y_crisp;
    for (auto c : {Cscm::KM, Cscm::WKM, Cscm::WNT}) {
      CHECK(type_reduce({c, 0.5}, f.lower, f.upper, y).y_crisp == doctest::Approx(ref).epsilon(1e-13));
    }
  }
}
