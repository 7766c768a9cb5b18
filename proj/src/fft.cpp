#include "honeycomb/fft.hpp"

#include "honeycomb/errors.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <utility>

namespace honeycomb {

namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n1, int n2, int sign) {
    std::lock_guard lock(mutex);
    const auto key = std::make_tuple(n1, n2, sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n1) * n2);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(n1, n2, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw NumericalError("FFTW could not create a plan");
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(void* plan, std::vector<std::complex<double>>& data, int n1, int n2) {
  if (data.size() != static_cast<std::size_t>(n1) * n2) throw DomainError("FFT array has the wrong size");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan), p, p);
}

}  // namespace

Fft2d::Fft2d(int n1, int n2) : n1_(n1), n2_(n2) {
  if (n1 < 1 || n2 < 1) throw DomainError("FFT dimensions must be positive");
  forward_plan_ = cache().get(n1, n2, FFTW_FORWARD);
  backward_plan_ = cache().get(n1, n2, FFTW_BACKWARD);
}

void Fft2d::forward(std::vector<std::complex<double>>& data) const { run(forward_plan_, data, n1_, n2_); }

void Fft2d::backward(std::vector<std::complex<double>>& data) const { run(backward_plan_, data, n1_, n2_); }

}  // namespace honeycomb
