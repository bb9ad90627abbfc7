#pragma once

#include <complex>
#include <cstddef>

namespace twp::detail {

enum class FftSign { forward, backward };

// Unnormalised in-place transforms backed by FFTW. Plans are cached per shape;
// planning is serialised, execution is reentrant.
void fft_many(std::complex<double>* data, int length, int count, int stride, int dist,
              FftSign sign);
void fft_2d(std::complex<double>* data, int n0, int n1, FftSign sign);

inline void fft_1d(std::complex<double>* data, int length, FftSign sign) {
  fft_many(data, length, 1, 1, length, sign);
}

}  // namespace twp::detail
