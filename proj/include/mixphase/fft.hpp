#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "mixphase/error.hpp"

namespace mixphase {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

constexpr bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

constexpr std::size_t next_power_of_two(std::size_t n) noexcept {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace detail {

// Eigen::FFT caches twiddles per size and is not safe to share across threads.
inline Eigen::FFT<double>& fft_engine() {
    thread_local Eigen::FFT<double> engine;
    return engine;
}

}  // namespace detail

/// Zero-padded forward DFT of a real sequence: X_k = sum_n x(n) e^{-j 2 pi k n / nfft}.
inline ComplexVector fft_real(std::span<const double> x, std::size_t nfft) {
    if (x.size() > nfft) throw InvalidArgument("fft: input longer than nfft");
    std::vector<double> padded(nfft, 0.0);
    std::copy(x.begin(), x.end(), padded.begin());
    ComplexVector out;
    detail::fft_engine().fwd(out, padded);
    return out;
}

/// Forward DFT of a complex sequence (length = transform size).
inline ComplexVector fft_complex(std::span<const Complex> x) {
    std::vector<Complex> in(x.begin(), x.end());
    ComplexVector out;
    detail::fft_engine().fwd(out, in);
    return out;
}

/// Inverse DFT, scaled by 1/n.
inline ComplexVector ifft(std::span<const Complex> X) {
    std::vector<Complex> in(X.begin(), X.end());
    ComplexVector out;
    detail::fft_engine().inv(out, in);
    return out;
}

}  // namespace mixphase
