#include "ringlens/fft.hpp"

#include <cmath>
#include <stdexcept>

#include "ringlens/constants.hpp"

namespace ringlens {

Fft::Fft(int n) : n_(n) {
    if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("fft size must be a power of two");
    log2n_ = 0;
    while ((1 << log2n_) < n) ++log2n_;

    bit_reverse_.resize(n);
    for (int i = 0; i < n; ++i) {
        int r = 0;
        for (int b = 0; b < log2n_; ++b)
            if (i & (1 << b)) r |= 1 << (log2n_ - 1 - b);
        bit_reverse_[i] = r;
    }

    // One twiddle per butterfly stride: w_m^k for m = 2,4,...,n, packed
    // stage by stage (n/2 entries in total... per direction).
    twiddle_.resize(n / 2 * log2n_);
    twiddle_inverse_.resize(n / 2 * log2n_);
    int offset = 0;
    for (int s = 1; s <= log2n_; ++s) {
        const int m = 1 << s;
        for (int k = 0; k < m / 2; ++k) {
            const double a = -two_pi * k / m;
            twiddle_[offset + k] = {std::cos(a), std::sin(a)};
            twiddle_inverse_[offset + k] = {std::cos(a), -std::sin(a)};
        }
        offset += m / 2;
    }
}

void Fft::transform(std::complex<double>* data, bool invert) const {
    for (int i = 0; i < n_; ++i) {
        const int j = bit_reverse_[i];
        if (i < j) std::swap(data[i], data[j]);
    }
    const auto& tw = invert ? twiddle_inverse_ : twiddle_;
    int offset = 0;
    for (int s = 1; s <= log2n_; ++s) {
        const int m = 1 << s;
        const int half = m / 2;
        for (int base = 0; base < n_; base += m) {
            for (int k = 0; k < half; ++k) {
                const std::complex<double> w = tw[offset + k];
                std::complex<double>& lo = data[base + k];
                std::complex<double>& hi = data[base + k + half];
                const std::complex<double> t = w * hi;
                hi = lo - t;
                lo += t;
            }
        }
        offset += half;
    }
}

void Fft::forward(std::complex<double>* data) const { transform(data, false); }

void Fft::inverse(std::complex<double>* data) const {
    transform(data, true);
    const double scale = 1.0 / n_;
    for (int i = 0; i < n_; ++i) data[i] *= scale;
}

}  // namespace ringlens
