#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mixphase/cepstrum.hpp"
#include "mixphase/error.hpp"
#include "mixphase/fft.hpp"
#include "mixphase/framing.hpp"

namespace mixphase {

inline constexpr double kDefaultCircleTol = 1e-10;

/// Roots of the frame's z-transform after trimming zero samples from both ends.
/// With c = trimmed samples and D = degree,
///     sum_n c_n z^-n = gain * z^-D * prod_m (z - roots[m]).
struct RootSet {
    std::vector<Complex> roots;
    std::vector<double> coeffs;  // trimmed samples
    double gain = 0.0;           // coeffs[0]
    std::size_t trim_lead = 0;
    std::size_t trim_trail = 0;
    std::size_t degree = 0;
    double max_residual = 0.0;  // worst relative backward error over all roots
};

struct RootSplit {
    std::vector<Complex> anticausal;  // |z| > 1 + tol
    std::vector<Complex> causal;      // |z| < 1 - tol
    std::vector<Complex> on_circle;   // ||z| - 1| <= tol
    double gain = 0.0;
    std::size_t trim_lead = 0;

    /// Roots assigned to the minimum-phase side: inside plus on the circle.
    std::vector<Complex> minimum_phase_roots() const {
        std::vector<Complex> r = causal;
        r.insert(r.end(), on_circle.begin(), on_circle.end());
        return r;
    }
};

enum class ComponentKind { Causal, Anticausal };

namespace detail {

struct PolyEval {
    Complex value;
    Complex derivative;
    double scale;  // sum |c_k| |z|^k, for the relative backward error
};

// Evaluates q(w) = sum_k c[k] w^k.
inline PolyEval eval_ascending(std::span<const double> c, Complex w) {
    Complex q = c.back();
    Complex dq = 0.0;
    double s = std::abs(c.back());
    const double aw = std::abs(w);
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        dq = dq * w + q;
        q = q * w + c[k];
        s = s * aw + std::abs(c[k]);
    }
    return {q, dq, s};
}

// Evaluates p(z) = sum_k c[k] z^(D-k).
inline PolyEval eval_descending(std::span<const double> c, Complex z) {
    Complex p = c.front();
    Complex dp = 0.0;
    double s = std::abs(c.front());
    const double az = std::abs(z);
    for (std::size_t k = 1; k < c.size(); ++k) {
        dp = dp * z + p;
        p = p * z + c[k];
        s = s * az + std::abs(c[k]);
    }
    return {p, dp, s};
}

/// Relative backward error of z as a root of p. Outside the unit circle the
/// reversed polynomial in 1/z is used so nothing overflows.
inline double root_residual(std::span<const double> c, Complex z) {
    const PolyEval e = std::abs(z) <= 1.0 ? eval_descending(c, z) : eval_ascending(c, 1.0 / z);
    return e.scale > 0.0 ? std::abs(e.value) / e.scale : std::abs(e.value);
}

/// One Newton step, kept only if it lowers the backward error.
inline Complex polish_root(std::span<const double> c, Complex z) {
    const double before = root_residual(c, z);
    Complex candidate;
    if (std::abs(z) <= 1.0) {
        const PolyEval e = eval_descending(c, z);
        if (e.derivative == Complex(0.0)) return z;
        candidate = z - e.value / e.derivative;
    } else {
        const Complex w = 1.0 / z;
        const PolyEval e = eval_ascending(c, w);
        if (e.derivative == Complex(0.0)) return z;
        candidate = 1.0 / (w - e.value / e.derivative);
    }
    return root_residual(c, candidate) < before ? candidate : z;
}

/// Parlett-Reinsch diagonal balancing (radix 2). Diagonal similarity keeps the
/// Hessenberg structure of the companion matrix.
inline void balance(Eigen::MatrixXd& a) {
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    const Eigen::Index n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                g = 1.0 / f;
                a.row(i) *= g;
                a.col(i) *= f;
            }
        }
    }
}

/// Roots of sum_k c[k] z^(D-k), c[0] != 0, c[D] != 0. Real roots come out with
/// zero imaginary part and complex roots as exact conjugate pairs.
inline std::vector<Complex> polynomial_roots(std::span<const double> c, double& max_residual) {
    const std::size_t degree = c.size() - 1;
    std::vector<Complex> roots;
    max_residual = 0.0;
    if (degree == 0) return roots;
    if (degree == 1) {
        roots.emplace_back(-c[1] / c[0], 0.0);
        max_residual = root_residual(c, roots[0]);
        return roots;
    }
    const auto n = static_cast<Eigen::Index>(degree);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) companion(0, j) = -c[static_cast<std::size_t>(j) + 1] / c[0];
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    balance(companion);

    Eigen::RealSchur<Eigen::MatrixXd> schur(n);
    schur.computeFromHessenberg(companion, Eigen::MatrixXd(), false);
    if (schur.info() != Eigen::Success) throw RootFinderError("QR iteration did not converge", -1.0);
    const Eigen::MatrixXd& t = schur.matrixT();

    roots.reserve(degree);
    for (Eigen::Index i = 0; i < n;) {
        if (i == n - 1 || t(i + 1, i) == 0.0) {
            const Complex z = polish_root(c, Complex(t(i, i), 0.0));
            roots.emplace_back(z.real(), 0.0);
            ++i;
        } else {
            const double p = 0.5 * (t(i, i) - t(i + 1, i + 1));
            const double disc = p * p + t(i + 1, i) * t(i, i + 1);
            const double zi = std::sqrt(std::abs(disc));
            if (disc >= 0.0) {
                // standardisation left a real pair in a 2x2 block
                roots.emplace_back(polish_root(c, Complex(t(i + 1, i + 1) + p + zi, 0.0)).real(), 0.0);
                roots.emplace_back(polish_root(c, Complex(t(i + 1, i + 1) + p - zi, 0.0)).real(), 0.0);
            } else {
                Complex z = polish_root(c, Complex(t(i + 1, i + 1) + p, zi));
                if (z.imag() < 0.0) z = std::conj(z);
                roots.push_back(z);
                roots.push_back(std::conj(z));
            }
            i += 2;
        }
    }
    for (const auto& z : roots) max_residual = std::max(max_residual, root_residual(c, z));
    if (!(max_residual < 1e-6))
        throw RootFinderError("root residual " + std::to_string(max_residual) + " too large", max_residual);
    return roots;
}

}  // namespace detail

/// Zeros of the z-transform of the frame samples.
inline RootSet zzt_roots(std::span<const double> samples) {
    std::size_t first = 0;
    while (first < samples.size() && samples[first] == 0.0) ++first;
    if (first == samples.size()) throw InvalidArgument("zzt_roots: all-zero frame");
    std::size_t last = samples.size() - 1;
    while (samples[last] == 0.0) --last;

    RootSet rs;
    rs.coeffs.assign(samples.begin() + static_cast<std::ptrdiff_t>(first),
                     samples.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    rs.trim_lead = first;
    rs.trim_trail = samples.size() - 1 - last;
    rs.degree = rs.coeffs.size() - 1;
    rs.gain = rs.coeffs.front();
    rs.roots = detail::polynomial_roots(rs.coeffs, rs.max_residual);
    return rs;
}

inline RootSet zzt_roots(const Frame& frame) { return zzt_roots(frame.samples); }

/// Partitions roots by modulus. Roots within tol_circle of |z| = 1 are kept in
/// on_circle and reconstructed on the minimum-phase side.
inline RootSplit split_roots(const RootSet& rs, double tol_circle = kDefaultCircleTol) {
    RootSplit s;
    s.gain = rs.gain;
    s.trim_lead = rs.trim_lead;
    for (const auto& z : rs.roots) {
        const double m = std::abs(z);
        if (std::abs(m - 1.0) <= tol_circle)
            s.on_circle.push_back(z);
        else if (m > 1.0)
            s.anticausal.push_back(z);
        else
            s.causal.push_back(z);
    }
    return s;
}

struct SignedLogGain {
    double log_abs = 0.0;
    int sign = 1;
};

/// Gain of the minimum-phase factor when the maximum-phase factor is
/// normalised as prod (1 - z/a): gain * prod(-a).
inline SignedLogGain minimum_phase_gain(double gain, std::span<const Complex> anticausal) {
    if (gain == 0.0) throw InvalidArgument("minimum_phase_gain: zero gain");
    SignedLogGain g{std::log(std::abs(gain)), gain < 0.0 ? -1 : 1};
    for (const auto& a : anticausal) {
        g.log_abs += std::log(std::abs(a));
        if (a.imag() == 0.0 && a.real() > 0.0) g.sign = -g.sign;
    }
    return g;
}

/// Spectrum and time response of one factor on the nfft grid:
///   causal:     gain * prod (1 - c e^{-jw})
///   anticausal:        prod (1 - e^{jw} / a)
/// Both match the cepstral convention (x^(0) on the causal side, no linear phase).
inline Component component_from_roots(std::span<const Complex> roots, double gain, ComponentKind kind,
                                      std::size_t nfft) {
    if (!is_power_of_two(nfft)) throw InvalidArgument("component_from_roots: nfft must be a power of two");
    for (const auto& z : roots) {
        const double m = std::abs(z);
        if (kind == ComponentKind::Causal && m > 1.0 + kDefaultCircleTol)
            throw InvalidArgument("component_from_roots: causal root outside the unit circle");
        if (kind == ComponentKind::Anticausal && !(m > 1.0))
            throw InvalidArgument("component_from_roots: anticausal root not outside the unit circle");
    }
    Component out;
    out.spectrum.assign(nfft, Complex(kind == ComponentKind::Causal ? gain : 1.0, 0.0));
    std::vector<Complex> unit(nfft);
    for (std::size_t k = 0; k < nfft; ++k)
        unit[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nfft));
    for (const auto& z : roots) {
        if (kind == ComponentKind::Causal) {
            for (std::size_t k = 0; k < nfft; ++k) out.spectrum[k] *= 1.0 - z * std::conj(unit[k]);
        } else {
            const Complex inv = 1.0 / z;
            for (std::size_t k = 0; k < nfft; ++k) out.spectrum[k] *= 1.0 - unit[k] * inv;
        }
    }
    const ComplexVector t = ifft(out.spectrum);
    out.time.resize(nfft);
    for (std::size_t i = 0; i < nfft; ++i) out.time[i] = t[i].real();
    return out;
}

inline DecompositionResult zzt_decompose(std::span<const double> samples, std::size_t nfft = kDefaultNfft,
                                         double tol_circle = kDefaultCircleTol) {
    if (!is_power_of_two(nfft) || nfft < samples.size())
        throw InvalidArgument("zzt_decompose: nfft must be a power of two no smaller than the frame");
    const RootSet rs = zzt_roots(samples);
    const RootSplit split = split_roots(rs, tol_circle);
    const SignedLogGain g = minimum_phase_gain(rs.gain, split.anticausal);

    Component mx = component_from_roots(split.anticausal, 1.0, ComponentKind::Anticausal, nfft);
    Component mn = component_from_roots(split.minimum_phase_roots(), static_cast<double>(g.sign) * std::exp(g.log_abs),
                                        ComponentKind::Causal, nfft);
    DecompositionResult r;
    r.max_phase = std::move(mx.time);
    r.max_phase_spectrum = std::move(mx.spectrum);
    r.min_phase = std::move(mn.time);
    r.min_phase_spectrum = std::move(mn.spectrum);
    r.method = Method::ZZT;
    r.nfft = nfft;
    r.linear_phase_slope = static_cast<int>(rs.trim_lead + split.anticausal.size());
    r.diagnostics.root_residual = rs.max_residual;
    r.diagnostics.degree = rs.degree;
    r.diagnostics.on_circle = split.on_circle.size();
    for (const auto& z : rs.roots)
        r.diagnostics.min_circle_distance = std::min(r.diagnostics.min_circle_distance, std::abs(std::abs(z) - 1.0));
    return r;
}

inline DecompositionResult zzt_decompose(const Frame& frame, std::size_t nfft = kDefaultNfft,
                                         double tol_circle = kDefaultCircleTol) {
    return zzt_decompose(frame.samples, nfft, tol_circle);
}

/// Complex cepstrum from root power sums:
///   x^(n) = -sum_C c^n / n   (n > 0)
///   x^(n) =  sum_AC a^n / n  (n < 0)
///   x^(0) = log|gain * prod(-a)|
/// The causal sum carries a minus sign from log(1 - c z^-1) = -sum (c z^-1)^n / n.
/// The returned cepstrum uses the smallest power-of-two grid that holds
/// |n| <= n_range and is zero beyond it.
inline ComplexCepstrum cepstrum_from_roots(const RootSplit& split, std::size_t n_range) {
    auto too_close = [](const Complex& z) { return std::abs(std::abs(z) - 1.0) < 1e-3; };
    if (!split.on_circle.empty() || std::any_of(split.causal.begin(), split.causal.end(), too_close) ||
        std::any_of(split.anticausal.begin(), split.anticausal.end(), too_close))
        throw InvalidArgument("cepstrum_from_roots: root within 1e-3 of the unit circle");

    ComplexCepstrum cc;
    cc.nfft = next_power_of_two(2 * (n_range + 1));
    cc.values.assign(cc.nfft, 0.0);
    const SignedLogGain g = minimum_phase_gain(split.gain, split.anticausal);
    cc.log_gain = g.log_abs;
    cc.gain_sign = g.sign;
    cc.values[0] = g.log_abs;
    cc.linear_phase_slope = static_cast<int>(split.trim_lead + split.anticausal.size());

    std::vector<Complex> pc(split.causal.begin(), split.causal.end());
    std::vector<Complex> pa(split.anticausal.size());
    for (std::size_t i = 0; i < pa.size(); ++i) pa[i] = 1.0 / split.anticausal[i];
    const std::vector<Complex> inv_a = pa;
    for (std::size_t n = 1; n <= n_range; ++n) {
        Complex sc = 0.0;
        for (std::size_t i = 0; i < pc.size(); ++i) {
            sc += pc[i];
            pc[i] *= split.causal[i];
        }
        Complex sa = 0.0;
        for (std::size_t i = 0; i < pa.size(); ++i) {
            sa += pa[i];
            pa[i] *= inv_a[i];
        }
        const double dn = static_cast<double>(n);
        cc.values[n] = -sc.real() / dn;
        cc.values[cc.nfft - n] = -sa.real() / dn;  // a^-n / (-n)
    }
    return cc;
}

}  // namespace mixphase
