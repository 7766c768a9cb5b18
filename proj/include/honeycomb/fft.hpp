#pragma once

// Thin RAII wrapper over FFTW for 2D complex transforms on row-major arrays.

#include <complex>
#include <vector>

namespace honeycomb {

/// Unnormalized in-place transforms of an n1 x n2 row-major array:
/// forward  F[g] = sum_x f[x] exp(-2 pi i g.x / n),
/// backward f[x] = sum_g F[g] exp(+2 pi i g.x / n).
/// Plans are created once per shape (FFTW_ESTIMATE, so results are
/// reproducible run to run) and shared; execution is thread-safe.
class Fft2d {
 public:
  Fft2d(int n1, int n2);

  void forward(std::vector<std::complex<double>>& data) const;
  void backward(std::vector<std::complex<double>>& data) const;

  int n1() const { return n1_; }
  int n2() const { return n2_; }

 private:
  int n1_;
  int n2_;
  void* forward_plan_;
  void* backward_plan_;
};

/// Signed frequency of storage index i on an axis of length n: [-n/2, n/2).
inline int signed_index(int i, int n) { return i < (n + 1) / 2 ? i : i - n; }
/// Storage index of signed frequency g on an axis of length n.
inline int storage_index(int g, int n) { return ((g % n) + n) % n; }

}  // namespace honeycomb
