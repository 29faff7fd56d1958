#pragma once

#include <complex>
#include <vector>

namespace ringlens {

/// Iterative radix-2 FFT for power-of-two sizes with precomputed twiddle
/// factors. Bit-for-bit deterministic and thread-safe once constructed,
/// which is what the reproducibility guarantees of the solvers rest on.
class Fft {
  public:
    explicit Fft(int n);

    int size() const { return n_; }

    /// In-place forward transform: X_k = sum_j x_j exp(-2 pi i j k / n).
    void forward(std::complex<double>* data) const;

    /// In-place inverse transform, scaled by 1/n.
    void inverse(std::complex<double>* data) const;

  private:
    void transform(std::complex<double>* data, bool invert) const;

    int n_;
    int log2n_;
    std::vector<int> bit_reverse_;
    std::vector<std::complex<double>> twiddle_;          // forward
    std::vector<std::complex<double>> twiddle_inverse_;
};

}  // namespace ringlens
