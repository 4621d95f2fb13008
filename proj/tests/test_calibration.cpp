#include <doctest.h>

#include <cmath>

#include "betagate/calibration.hpp"
#include "betagate/detector.hpp"
#include "betagate/synth.hpp"
#include "helpers.hpp"

using namespace betagate;
using namespace betagate::testing;

namespace {

BandPowerSeries series_of(std::vector<double> values) {
  BandPowerSeries s;
  s.values = std::move(values);
  s.window_len = 1.0;
  s.hop = 0.1;
  s.first_emit_time = 1.0;
  return s;
}

// textbook two-pass reference, independent of the streaming implementation
std::pair<double, double> two_pass_stats(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

}  // namespace

TEST_CASE("baseline stats: constant and two-point series") {
  auto stats = compute_baseline(series_of({2.0, 2.0, 2.0, 2.0}));
  CHECK(stats.mean == doctest::Approx(2.0));
  CHECK(stats.std == 0.0);
  CHECK(stats.n_samples == 4);

  stats = compute_baseline(series_of({1.0, 3.0}));
  CHECK(stats.mean == doctest::Approx(2.0));
  CHECK(stats.std == doctest::Approx(1.0));  // population std, divisor n
}

TEST_CASE("baseline stats: fewer than two values is a calibration error") {
  CHECK_THROWS_AS(compute_baseline(series_of({1.0})), CalibrationError);
  CHECK_THROWS_AS(compute_baseline(series_of({})), CalibrationError);
}

TEST_CASE("baseline stats over synthetic rest match a two-pass recomputation") {
  const auto rec = generate_rest(ChannelLayout::standard(), SynthConfig{}, 42, 25.0);
  const auto cs = control_signal(rec);
  const auto stats = compute_baseline(cs.series);
  const auto [mean, std] = two_pass_stats(cs.series.values);
  CHECK(stats.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(stats.std == doctest::Approx(std).epsilon(1e-10));
  CHECK(stats.n_samples == 241);
  CHECK(stats.duration == doctest::Approx(25.0));
  CHECK(stats.mean > 0.0);
  CHECK(stats.std > 0.0);
}

TEST_CASE("threshold formulas") {
  BaselineStats s;
  s.mean = 2.0;
  s.std = 0.0;
  auto th = compute_thresholds(s);
  CHECK(th.th1 == 2.0);
  CHECK(th.th2 == 2.0);
  CHECK(th.degenerate());

  s.mean = 1.0;
  s.std = 0.5;
  th = compute_thresholds(s);
  CHECK(th.th1 == doctest::Approx(2.5));
  CHECK(th.th2 == doctest::Approx(1.5));
  CHECK(!th.degenerate());

  s.mean = 0.0;
  s.std = 1.0;
  th = compute_thresholds(s);
  CHECK(th.th1 == 3.0);
  CHECK(th.th2 == 1.0);
}

TEST_CASE("thresholds are exact mean + k*std for random stats") {
  Rng rng(123);
  for (int i = 0; i < 20; ++i) {
    BaselineStats s;
    s.mean = rng.uniform(0.0, 100.0);
    s.std = rng.uniform(0.0, 50.0);
    const auto th = compute_thresholds(s);
    CHECK(th.th1 == s.mean + 3.0 * s.std);  // bitwise: same expression
    CHECK(th.th2 == s.mean + 1.0 * s.std);
    CHECK(th.th1 >= th.th2);
    CHECK(th.th1 - th.th2 == doctest::Approx(2.0 * s.std).epsilon(1e-12));
  }
}

TEST_CASE("shift and scale equivariance of series-derived thresholds") {
  Rng rng(7);
  std::vector<double> base;
  for (int i = 0; i < 300; ++i) base.push_back(rng.uniform(0.0, 10.0));

  const auto th0 = compute_thresholds(compute_baseline(series_of(base)));

  const double c = 4.75;
  auto shifted = base;
  for (auto& v : shifted) v += c;
  const auto th_shift = compute_thresholds(compute_baseline(series_of(shifted)));
  CHECK(th_shift.th1 == doctest::Approx(th0.th1 + c).epsilon(1e-12));
  CHECK(th_shift.th2 == doctest::Approx(th0.th2 + c).epsilon(1e-12));

  const double a = 2.5;
  auto scaled = base;
  for (auto& v : scaled) v *= a;
  const auto th_scale = compute_thresholds(compute_baseline(series_of(scaled)));
  CHECK(th_scale.th1 == doctest::Approx(a * th0.th1).epsilon(1e-12));
  CHECK(th_scale.th2 == doctest::Approx(a * th0.th2).epsilon(1e-12));
}
