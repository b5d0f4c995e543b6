#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "it2fls/losses.hpp"

using namespace it2fls;
using namespace it2fls::testing;

TEST_CASE("log-cosh") {
  CHECK(loss_logcosh(0.0) == 0.0);
  CHECK(loss_logcosh(1.0) == doctest::Approx(0.4337808304830271).epsilon(1e-14));
  CHECK(loss_logcosh(-1.0) == loss_logcosh(1.0));
  CHECK(loss_logcosh(100.0) == doctest::Approx(100.0 - std::log(2.0)).epsilon(1e-14));
  CHECK(loss_logcosh(1e6) == doctest::Approx(1e6 - std::log(2.0)).epsilon(1e-14));
  for (double r : {1e-3, 0.3, 2.0, 15.0}) {
    CHECK(loss_logcosh(r) == doctest::Approx(std::log(std::cosh(r))).epsilon(1e-12));
  }
}

TEST_CASE("tilted loss") {
  CHECK(loss_tilted(1.0, 0.0, 0.005) == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(loss_tilted(0.0, 1.0, 0.005) == doctest::Approx(0.995).epsilon(1e-15));
  CHECK(loss_tilted(1.0, 0.0, 0.995) == doctest::Approx(0.995).epsilon(1e-15));
  CHECK(loss_tilted(2.0, 2.0, 0.3) == 0.0);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const double y = uniform(rng, -3, 3), b = uniform(rng, -3, 3), tau = uniform(rng, 0.01, 0.99);
    CHECK(loss_tilted(y, b, tau) >= 0.0);
  }
}

TEST_CASE("quantile validation") {
  CHECK_NOTHROW(validate(Quantiles{}));
  CHECK_THROWS_AS(validate(Quantiles{0.6, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(validate(Quantiles{0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(validate(Quantiles{0.5, 1.0}), std::invalid_argument);
}

namespace {

// A single KM rule with zero slopes: a type-1 constant model whose bounds
// coincide with its crisp output.
FuzzySystem constant_system(double crisp) {
  FuzzySystem sys;
  sys.antecedents.centers = Matrix(1, 1, 0.0);
  sys.antecedents.sigma_upper = Matrix(1, 1, 1e6);
  sys.antecedents.sigma_lower = Matrix(1, 1, 1e6);
  sys.antecedents.heights = Matrix(1, 1, 1.0);
  sys.consequents = {Matrix(1, 1, 0.0), {crisp}};
  sys.cscm = {Cscm::KM, 0.5};
  return sys;
}

}  // namespace

TEST_CASE("composite loss examples") {
  Dataset d;
  d.features = Matrix(1, 1, 0.0);
  SUBCASE("perfect model") {
    d.targets = {2.0};
    CHECK(composite_loss(constant_system(2.0), d, {}) == 0.0);
  }
  SUBCASE("residual 1 with exact bounds") {
    // All outputs are 2 for target 3; the pinball terms add 0.005 and 0.995
    // on top of log cosh(1).
    d.targets = {3.0};
    const auto sys = constant_system(2.0);
    const auto parts = evaluate_loss(sys, d, {}, {});
    CHECK(parts.accuracy == doctest::Approx(0.4337808304830271).epsilon(1e-12));
    CHECK(parts.lower == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(parts.upper == doctest::Approx(0.995).epsilon(1e-12));
    LossTerms only_acc{true, false, false};
    CHECK(composite_loss(sys, d, {}, only_acc) == doctest::Approx(0.433781).epsilon(1e-6));
  }
  SUBCASE("empty dataset") {
    Dataset empty;
    empty.features = Matrix(0, 1);
    CHECK_THROWS_AS(composite_loss(constant_system(0), empty, {}), EmptyDataset);
  }
}

TEST_CASE("composite loss matches a scalar recomputation") {
  Rng rng(12);
  for (const auto& arch : all_architectures(3, 2)) {
    const auto model = random_model(rng, arch);
    const auto sys = model.system();
    const auto data = random_dataset(rng, 17, 2);
    const Quantiles q{0.05, 0.9};
    double acc = 0.0, lo = 0.0, up = 0.0;
    for (std::size_t n = 0; n < data.size(); ++n) {
      const auto pr = predict(data.features.row(n), sys);
      const double y = data.targets[n];
      acc += std::log(std::cosh(y - pr.y_crisp));
      const double rl = y - pr.y_lower, ru = y - pr.y_upper;
      lo += std::max(q.lower * rl, (q.lower - 1) * rl);
      up += std::max(q.upper * ru, (q.upper - 1) * ru);
    }
    const double n = double(data.size());
    const auto parts = evaluate_loss(sys, data, {}, q);
    CHECK(parts.accuracy == doctest::Approx(acc / n).epsilon(1e-12));
    CHECK(parts.lower == doctest::Approx(lo / n).epsilon(1e-12));
    CHECK(parts.upper == doctest::Approx(up / n).epsilon(1e-12));
    CHECK(composite_loss(sys, data, q) == doctest::Approx((acc + lo + up) / n).epsilon(1e-12));

    const std::vector<std::size_t> rows{3, 0, 9};
    double acc_rows = 0.0;
    for (auto r : rows) acc_rows += std::log(std::cosh(data.targets[r] - predict(data.features.row(r), sys).y_crisp));
    CHECK(evaluate_loss(sys, data, rows, q).accuracy == doctest::Approx(acc_rows / 3).epsilon(1e-12));
  }
}

TEST_CASE("non-finite loss is reported, not masked") {
  Dataset d;
  d.features = Matrix(1, 1, 0.0);
  d.targets = {NAN};
  const auto sys = constant_system(1.0);
  CHECK(std::isnan(evaluate_loss(sys, d, {}, {}).total));
  CHECK_THROWS_AS(composite_loss(sys, d, {}), NonFiniteLoss);
}
