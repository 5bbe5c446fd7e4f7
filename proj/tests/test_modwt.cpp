// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "wavevol/error.hpp"
#include "wavevol/modwt.hpp"

using namespace wavevol;

namespace {

std::vector<double> gaussian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  std::vector<double> x(n);
  for (double& v : x) v = z(rng);
  return x;
}

double energy(const std::vector<double>& x) { return std::inner_product(x.begin(), x.end(), x.begin(), 0.0); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::io_error;
}

}  // namespace

TEST_CASE("constant series has no detail") {
  const std::vector<double> x(64, 3.5);
  const ModwtDecomposition d = transform(x, WaveletSpec::d4(), 4);
  for (const auto& w : d.wavelet) {
    for (double v : w) CHECK(std::fabs(v) < 1e-14);
  }
  for (double v : d.scaling) CHECK(v == doctest::Approx(3.5).epsilon(1e-14));
}

TEST_CASE("haar impulse") {
  const std::vector<double> x{1, 0, 0, 0};
  const ModwtDecomposition d = transform(x, WaveletSpec::haar(), 1);
  const double w[] = {0.5, -0.5, 0.0, 0.0};
  const double v[] = {0.5, 0.5, 0.0, 0.0};
  for (int i = 0; i < 4; ++i) {
    CHECK(d.wavelet[0][i] == doctest::Approx(w[i]));
    CHECK(d.scaling[i] == doctest::Approx(v[i]));
  }
  CHECK(d.boundary_counts[0] == 1);
}

TEST_CASE("energy is preserved") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {7u, 64u, 100u, 1000u}) {
    const std::vector<double> x = gaussian(n, rng);
    for (WaveletSpec spec : {WaveletSpec::haar(), WaveletSpec::d4()}) {
      if (n < static_cast<std::size_t>(spec.length())) continue;
      for (int j = 1; j <= max_level(n); ++j) {
        CAPTURE(n);
        CAPTURE(j);
        const std::vector<double> e = energy_by_scale(transform(x, spec, j));
        const double total = std::accumulate(e.begin(), e.end(), 0.0);
        CHECK(std::fabs(total - energy(x)) <= 1e-10 * energy(x));
      }
    }
  }
}

TEST_CASE("pyramid agrees with direct convolution") {
  std::mt19937_64 rng(12);
  for (std::size_t n : {16u, 100u, 777u, 2048u}) {
    const std::vector<double> x = gaussian(n, rng);
    for (WaveletSpec spec : {WaveletSpec::haar(), WaveletSpec::d4()}) {
      const int levels = std::min(6, max_level(n));
      const ModwtDecomposition a = transform(x, spec, levels);
      const ModwtDecomposition b = transform_direct(x, spec, levels);
      for (int j = 0; j < levels; ++j) {
        for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(a.wavelet[j][i] - b.wavelet[j][i]) < 1e-12);
      }
      for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(a.scaling[i] - b.scaling[i]) < 1e-12);
    }
  }
}

TEST_CASE("circular shift commutes with the transform") {
  std::mt19937_64 rng(13);
  const std::size_t n = 200;
  const std::vector<double> x = gaussian(n, rng);
  for (std::size_t k : {1u, 17u, 199u}) {
    std::vector<double> shifted(x);
    std::rotate(shifted.begin(), shifted.end() - static_cast<std::ptrdiff_t>(k), shifted.end());
    const ModwtDecomposition a = transform_direct(x, WaveletSpec::d4(), 4);
    const ModwtDecomposition b = transform_direct(shifted, WaveletSpec::d4(), 4);
    for (int j = 0; j < 4; ++j) {
      for (std::size_t i = 0; i < n; ++i) CHECK(b.wavelet[j][(i + k) % n] == a.wavelet[j][i]);
    }
    for (std::size_t i = 0; i < n; ++i) CHECK(b.scaling[(i + k) % n] == a.scaling[i]);

    const ModwtDecomposition p = transform(x, WaveletSpec::d4(), 4);
    const ModwtDecomposition q = transform(shifted, WaveletSpec::d4(), 4);
    for (int j = 0; j < 4; ++j) {
      for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(q.wavelet[j][(i + k) % n] - p.wavelet[j][i]) < 1e-14);
    }
  }
}

TEST_CASE("white noise energy halves per scale") {
  std::mt19937_64 rng(14);
  const std::size_t n = 1024;
  const int levels = 4;
  const int draws = 1000;
  std::vector<double> mean(levels + 1, 0.0);
  for (int r = 0; r < draws; ++r) {
    const std::vector<double> e = energy_by_scale(transform(gaussian(n, rng), WaveletSpec::d4(), levels));
    for (int j = 0; j <= levels; ++j) mean[j] += e[j] / draws;
  }
  for (int j = 1; j <= levels; ++j) {
    CAPTURE(j);
    CHECK(mean[j - 1] == doctest::Approx(std::ldexp(static_cast<double>(n), -j)).epsilon(0.05));
  }
  CHECK(mean[levels] == doctest::Approx(std::ldexp(static_cast<double>(n), -levels)).epsilon(0.05));
}

TEST_CASE("wavelet variance estimators") {
  const std::vector<double> c(64, 1.0);
  const ModwtDecomposition dc = transform(c, WaveletSpec::d4(), 2);
  CHECK(wavelet_variance(dc, 1, VarianceMode::unbiased) == doctest::Approx(0.0));
  CHECK(wavelet_variance(dc, 2, VarianceMode::biased) == doctest::Approx(0.0));

  std::mt19937_64 rng(15);
  double mean = 0.0;
  for (int r = 0; r < 500; ++r) {
    const ModwtDecomposition d = transform(gaussian(4096, rng), WaveletSpec::haar(), 1);
    mean += wavelet_variance(d, 1, VarianceMode::unbiased) / 500.0;
  }
  CHECK(mean == doctest::Approx(0.5).epsilon(0.02));

  const std::vector<double> x = gaussian(16, rng);
  const ModwtDecomposition d = transform(x, WaveletSpec::d4(), 3);
  CHECK(code_of([&] { wavelet_variance(d, 3, VarianceMode::unbiased); }) ==
        ErrorCode::insufficient_coefficients);
  CHECK(std::isfinite(wavelet_variance(d, 3, VarianceMode::biased)));
}

TEST_CASE("transform preconditions") {
  const std::vector<double> x(8, 0.1);
  CHECK(code_of([&] { transform(x, WaveletSpec::d4(), 4); }) == ErrorCode::level_too_deep);
  const std::vector<double> tiny(3, 0.1);
  CHECK(code_of([&] { transform(tiny, WaveletSpec::d4(), 1); }) == ErrorCode::series_too_short);
  CHECK(code_of([&] { transform(x, WaveletSpec::d4(), 0); }) == ErrorCode::level_too_deep);
}
