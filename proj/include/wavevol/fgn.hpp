// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace wavevol {

/// Autocovariance of unit-variance fractional Gaussian noise at lag k.
double fgn_autocovariance(double hurst, std::size_t k);

/// Exact fGn sampler by circulant embedding (Davies–Harte). One FFT of
/// length 2N yields two independent unit-variance samples of length N.
class FgnGenerator {
 public:
  FgnGenerator(std::size_t n, double hurst);
  ~FgnGenerator();
  FgnGenerator(const FgnGenerator&) = delete;
  FgnGenerator& operator=(const FgnGenerator&) = delete;

  std::size_t size() const { return n_; }
  double hurst() const { return hurst_; }

  void generate(std::mt19937_64& rng, std::span<double> first, std::span<double> second) const;
  std::vector<double> generate(std::mt19937_64& rng) const;

 private:
  struct Plan;
  std::size_t n_;
  double hurst_;
  std::vector<double> root_eigen_;
  std::unique_ptr<Plan> plan_;
};

}  // namespace wavevol
