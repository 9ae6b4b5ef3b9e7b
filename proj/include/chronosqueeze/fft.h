#ifndef CHRONOSQUEEZE_FFT_H_
#define CHRONOSQUEEZE_FFT_H_

#include <complex>
#include <cstddef>
#include <span>

namespace chronosqueeze {

/// Forward real-to-complex transform out[k] = sum_j in[j] exp(-2 pi i j k / n),
/// k = 0 .. n/2.  Plans are cached per size; execution is thread-safe.
void real_fft(std::span<const double> in, std::span<std::complex<double>> out);

}  // namespace chronosqueeze

#endif  // CHRONOSQUEEZE_FFT_H_
