#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "innerspace/fft.hpp"

namespace innerspace {

using cplx = std::complex<double>;

// Geometric envelope |c_n| <= C * rho^n for every index of the (conceptually
// infinite) sequence. All tail estimates in the library are derived from it.
struct DecayCert {
    double C = 0.0;
    double rho = 0.5;

    DecayCert() = default;
    DecayCert(double C_, double rho_) : C(C_), rho(rho_) {
        if (!(C >= 0.0) || !std::isfinite(C)) {
            throw std::invalid_argument("DecayCert: C must be finite and >= 0");
        }
        if (!(rho > 0.0 && rho < 1.0)) {
            throw std::invalid_argument("DecayCert: rho must lie in (0,1)");
        }
    }

    // sum_{n>M} |c_n|^2 <= C^2 rho^{2(M+1)} / (1 - rho^2)
    double tail_sq(std::size_t M) const {
        const double p = std::pow(rho, static_cast<double>(M + 1));
        return C * C * p * p / (1.0 - rho * rho);
    }

    // sum_{n>M} |c_n| <= C rho^{M+1} / (1 - rho)
    double tail_abs(std::size_t M) const {
        return C * std::pow(rho, static_cast<double>(M + 1)) / (1.0 - rho);
    }

    // Smallest truncation order whose tail_sq bound is <= target.
    std::size_t order_for_tail_sq(double target, std::size_t cap = 100000) const {
        if (C == 0.0) return 0;
        if (!(target > 0.0)) throw std::invalid_argument("order_for_tail_sq: target must be > 0");
        // solve C^2 rho^{2(M+1)} / (1-rho^2) <= target in logs, then adjust
        const double lhs = std::log(target * (1.0 - rho * rho)) - 2.0 * std::log(C);
        double M = lhs / (2.0 * std::log(rho)) - 1.0;
        std::size_t order = M <= 0.0 ? 0 : static_cast<std::size_t>(M) + 1;
        while (order > 0 && tail_sq(order - 1) <= target) --order;
        while (tail_sq(order) > target && order < cap) ++order;
        return order;
    }
};

// Finite prefix of a complex sequence indexed from 0, optionally carrying a
// decay certificate for the unstored tail. Immutable after construction.
class CoeffSeq {
public:
    explicit CoeffSeq(std::vector<cplx> coeffs, std::optional<DecayCert> decay = std::nullopt)
        : coeffs_(std::move(coeffs)), decay_(decay) {
        if (coeffs_.empty()) {
            throw std::invalid_argument("CoeffSeq: coefficient list must be non-empty");
        }
        if (decay_) {
            double env = decay_->C;
            for (std::size_t n = 0; n < coeffs_.size(); ++n) {
                if (std::abs(coeffs_[n]) > env * (1.0 + 1e-12) + 1e-300) {
                    throw std::invalid_argument(
                        "CoeffSeq: coefficient at n=" + std::to_string(n) +
                        " violates decay certificate");
                }
                env *= decay_->rho;
            }
        }
    }

    // Exact finite sequence (tail identically zero). The attached certificate
    // is trivially valid; its rho is sized so the tail bound reflects the
    // sequence's own trailing decay without overflowing C.
    static CoeffSeq polynomial(std::vector<cplx> coeffs) {
        if (coeffs.empty()) {
            throw std::invalid_argument("CoeffSeq::polynomial: empty coefficient list");
        }
        const double len = static_cast<double>(coeffs.size());
        const double rho = std::pow(2.0, -64.0 / len);
        double C = 0.0;
        double env = 1.0; // rho^{-n}
        for (const auto& c : coeffs) {
            C = std::max(C, std::abs(c) * env);
            env /= rho;
        }
        return CoeffSeq(std::move(coeffs), DecayCert(C * (1.0 + 1e-9), rho));
    }

    const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    // highest stored index
    std::size_t order() const noexcept { return coeffs_.size() - 1; }
    const cplx& operator[](std::size_t n) const { return coeffs_[n]; }
    const std::optional<DecayCert>& decay() const noexcept { return decay_; }

    CoeffSeq with_decay(std::optional<DecayCert> d) const { return CoeffSeq(coeffs_, d); }
    CoeffSeq truncated(std::size_t order) const {
        std::vector<cplx> c(coeffs_.begin(),
                            coeffs_.begin() + static_cast<std::ptrdiff_t>(
                                std::min(order + 1, coeffs_.size())));
        return CoeffSeq(std::move(c), decay_);
    }

private:
    std::vector<cplx> coeffs_;
    std::optional<DecayCert> decay_;
};

// Partial sum plus (when certified) a bound on the omitted remainder: the true
// value lies in [partial, partial + tail_sq].
struct NormEstimate {
    double partial = 0.0;
    std::optional<double> tail_sq;

    double upper() const { return partial + tail_sq.value_or(0.0); }
};

struct Correlation {
    cplx value{0.0, 0.0};
    std::optional<double> tail_radius;
};

inline NormEstimate l2_norm_sq(const CoeffSeq& s) {
    NormEstimate out;
    for (const auto& c : s.coeffs()) out.partial += std::norm(c);
    if (s.decay()) out.tail_sq = s.decay()->tail_sq(s.order());
    return out;
}

// r(m) = sum_n s_n conj(s_{n+m}) over stored overlap, with a radius bounding
// the omitted terms when a certificate exists.
inline Correlation correlate(const CoeffSeq& s, std::size_t m) {
    if (m >= s.size()) {
        throw std::invalid_argument("correlate: lag must be smaller than the stored length");
    }
    Correlation out;
    if (m == 0) {
        double acc = 0.0;
        for (const auto& c : s.coeffs()) acc += std::norm(c);
        out.value = cplx(acc, 0.0);
    } else {
        cplx acc{0.0, 0.0};
        for (std::size_t n = 0; n + m < s.size(); ++n) {
            acc += s[n] * std::conj(s[n + m]);
        }
        out.value = acc;
    }
    if (s.decay()) {
        const auto& d = *s.decay();
        const std::size_t M = s.order();
        // sum_{n > M-m} C^2 rho^{2n+m} = C^2 rho^{2M-m+2} / (1-rho^2)
        out.tail_radius = d.C * d.C *
                          std::pow(d.rho, static_cast<double>(2 * M + 2) - static_cast<double>(m)) /
                          (1.0 - d.rho * d.rho);
    }
    return out;
}

inline CoeffSeq shift(const CoeffSeq& s, std::size_t m) {
    if (m == 0) return s;
    std::vector<cplx> out(s.size() + m, cplx(0.0, 0.0));
    std::copy(s.coeffs().begin(), s.coeffs().end(), out.begin() + static_cast<std::ptrdiff_t>(m));
    std::optional<DecayCert> cert;
    if (s.decay()) {
        const double C = s.decay()->C / std::pow(s.decay()->rho, static_cast<double>(m)) * (1.0 + 1e-9);
        if (std::isfinite(C)) cert = DecayCert(C, s.decay()->rho);
    }
    return CoeffSeq(std::move(out), cert);
}

inline CoeffSeq scaled(const CoeffSeq& s, cplx factor) {
    std::vector<cplx> out(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) out[n] = factor * s[n];
    std::optional<DecayCert> cert;
    if (s.decay()) cert = DecayCert(s.decay()->C * std::abs(factor) * (1.0 + 1e-9), s.decay()->rho);
    return CoeffSeq(std::move(out), cert);
}

inline CoeffSeq add(const CoeffSeq& a, const CoeffSeq& b) {
    std::vector<cplx> out(std::max(a.size(), b.size()), cplx(0.0, 0.0));
    for (std::size_t n = 0; n < a.size(); ++n) out[n] += a[n];
    for (std::size_t n = 0; n < b.size(); ++n) out[n] += b[n];
    std::optional<DecayCert> cert;
    if (a.decay() && b.decay()) {
        cert = DecayCert((a.decay()->C + b.decay()->C) * (1.0 + 1e-9),
                         std::max(a.decay()->rho, b.decay()->rho));
    }
    return CoeffSeq(std::move(out), cert);
}

namespace detail {

// Valid certificate for a Cauchy product: |(a*b)_n| <= Ca Cb (n+1) rbar^n,
// and (n+1) q^n with q = rbar/rho' is maximized over integers near
// n* = -1/ln q - 1.
inline DecayCert combine_certs(const DecayCert& a, const DecayCert& b) {
    const double rbar = std::max(a.rho, b.rho);
    const double rp = 0.5 * (rbar + 1.0);
    const double q = rbar / rp;
    const double nstar = -1.0 / std::log(q) - 1.0;
    double sup = 1.0; // n = 0
    if (nstar > 0.0) {
        for (double n : {std::floor(nstar), std::ceil(nstar)}) {
            sup = std::max(sup, (n + 1.0) * std::pow(q, n));
        }
    }
    return DecayCert(a.C * b.C * sup * (1.0 + 1e-9), rp);
}

inline std::vector<cplx> convolve_raw_direct(const std::vector<cplx>& a,
                                             const std::vector<cplx>& b) {
    std::vector<cplx> out(a.size() + b.size() - 1, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

inline std::vector<cplx> convolve_raw_fft(const std::vector<cplx>& a,
                                          const std::vector<cplx>& b) {
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t n = next_pow2(out_len);
    std::vector<cplx> fa(n, cplx(0.0, 0.0)), fb(n, cplx(0.0, 0.0));
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    fft_radix2(fa, false);
    fft_radix2(fb, false);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft_radix2(fa, true);
    fa.resize(out_len);
    return fa;
}

} // namespace detail

inline constexpr std::size_t kConvolveCrossover = 64;

inline std::optional<DecayCert> convolved_cert(const CoeffSeq& a, const CoeffSeq& b) {
    if (a.decay() && b.decay()) return detail::combine_certs(*a.decay(), *b.decay());
    return std::nullopt;
}

inline CoeffSeq convolve_direct(const CoeffSeq& a, const CoeffSeq& b) {
    return CoeffSeq(detail::convolve_raw_direct(a.coeffs(), b.coeffs()), convolved_cert(a, b));
}

inline CoeffSeq convolve_fft(const CoeffSeq& a, const CoeffSeq& b) {
    auto cert = convolved_cert(a, b);
    if (cert) {
        // The transform smears an absolute rounding floor over every entry;
        // deep-decay indices would otherwise sit above the geometric envelope.
        // Raising C so the envelope clears the floor at the last stored index
        // keeps the certificate valid for the true tail as well.
        double na = 0.0, nb = 0.0;
        for (const auto& x : a.coeffs()) na += std::norm(x);
        for (const auto& x : b.coeffs()) nb += std::norm(x);
        const std::size_t L = a.size() + b.size() - 2;
        const double bits = std::log2(static_cast<double>(detail::next_pow2(L + 1)));
        const double floor = 32.0 * 2.22e-16 * bits * std::sqrt(na * nb) + 1e-290;
        const double lifted =
            std::exp(std::log(floor) - static_cast<double>(L) * std::log(cert->rho));
        if (!std::isfinite(lifted)) {
            cert = std::nullopt;
        } else if (lifted > cert->C) {
            cert = DecayCert(lifted, cert->rho);
        }
    }
    return CoeffSeq(detail::convolve_raw_fft(a.coeffs(), b.coeffs()), cert);
}

inline CoeffSeq convolve(const CoeffSeq& a, const CoeffSeq& b,
                         std::size_t crossover = kConvolveCrossover) {
    const std::size_t out_len = a.size() + b.size() - 1;
    return out_len < crossover ? convolve_direct(a, b) : convolve_fft(a, b);
}

} // namespace innerspace
