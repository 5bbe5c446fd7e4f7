// SPDX-License-Identifier: Apache-2.0
#include "wavevol/fgn.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <string>

#include "wavevol/error.hpp"

namespace wavevol {
namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (!data) throw std::bad_alloc();
  }
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

struct FgnGenerator::Plan {
  fftw_plan plan = nullptr;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    if (plan) fftw_destroy_plan(plan);
  }
};

double fgn_autocovariance(double hurst, std::size_t k) {
  const double h2 = 2.0 * hurst;
  const double kk = static_cast<double>(k);
  if (k == 0) return 1.0;
  return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(kk - 1.0, h2));
}

FgnGenerator::FgnGenerator(std::size_t n, double hurst) : n_(n), hurst_(hurst) {
  if (!(hurst > 0.0 && hurst <= 1.0)) {
    throw Error(ErrorCode::invalid_hurst, "H must lie in (0, 1], got " + std::to_string(hurst));
  }
  if (n < 1) throw Error(ErrorCode::invalid_config, "fGn length must be >= 1");

  const std::size_t m = 2 * n;
  ComplexBuffer in(m);
  ComplexBuffer out(m);
  plan_ = std::make_unique<Plan>();
  {
    std::lock_guard lock(planner_mutex());
    plan_->plan = fftw_plan_dft_1d(static_cast<int>(m), in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
  }

  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t lag = k <= n ? k : m - k;
    in.data[k][0] = fgn_autocovariance(hurst, lag);
    in.data[k][1] = 0.0;
  }
  fftw_execute_dft(plan_->plan, in.data, out.data);

  root_eigen_.resize(m);
  const double scale = std::sqrt(1.0 / static_cast<double>(m));
  for (std::size_t k = 0; k < m; ++k) {
    double lambda = out.data[k][0];
    if (lambda < 0.0) {
      if (lambda < -1e-8 * static_cast<double>(m)) {
        throw Error(ErrorCode::invalid_hurst, "circulant embedding is not nonnegative definite");
      }
      lambda = 0.0;
    }
    root_eigen_[k] = std::sqrt(lambda) * scale;
  }
}

FgnGenerator::~FgnGenerator() = default;

void FgnGenerator::generate(std::mt19937_64& rng, std::span<double> first, std::span<double> second) const {
  const std::size_t m = 2 * n_;
  ComplexBuffer in(m);
  ComplexBuffer out(m);
  std::normal_distribution<double> normal;
  for (std::size_t k = 0; k < m; ++k) {
    in.data[k][0] = root_eigen_[k] * normal(rng);
    in.data[k][1] = root_eigen_[k] * normal(rng);
  }
  fftw_execute_dft(plan_->plan, in.data, out.data);
  for (std::size_t i = 0; i < n_ && i < first.size(); ++i) first[i] = out.data[i][0];
  for (std::size_t i = 0; i < n_ && i < second.size(); ++i) second[i] = out.data[i][1];
}

std::vector<double> FgnGenerator::generate(std::mt19937_64& rng) const {
  std::vector<double> x(n_);
  generate(rng, x, {});
  return x;
}

}  // namespace wavevol
