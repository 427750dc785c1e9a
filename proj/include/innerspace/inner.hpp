#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "innerspace/fft.hpp"
#include "innerspace/seq.hpp"

namespace innerspace {

struct BlaschkeZero {
    cplx a;
    unsigned mult = 1;
};

struct SingularAtom {
    double theta = 0.0; // boundary angle
    double mass = 0.0;  // atomic singular mass, > 0
};

// Symbolic description of an inner function:
//   e^{i phase} * z^m * prod Blaschke factors * prod atomic singular factors.
// Zeros at the origin are expressed through monomial_order, never as a = 0.
struct InnerSpec {
    double phase = 0.0;
    unsigned monomial_order = 0;
    std::vector<BlaschkeZero> zeros;
    std::vector<SingularAtom> atoms;

    bool has_atoms() const noexcept { return !atoms.empty(); }

    unsigned blaschke_degree() const noexcept {
        unsigned d = 0;
        for (const auto& z : zeros) d += z.mult;
        return d;
    }

    double max_zero_modulus() const noexcept {
        double m = 0.0;
        for (const auto& z : zeros) m = std::max(m, std::abs(z.a));
        return m;
    }

    // decay rate near 1 forces huge truncation orders
    bool ill_conditioned() const noexcept { return max_zero_modulus() > 0.95; }

    void validate() const {
        if (!std::isfinite(phase)) throw std::invalid_argument("InnerSpec: phase must be finite");
        for (std::size_t i = 0; i < zeros.size(); ++i) {
            const double m = std::abs(zeros[i].a);
            if (!(m > 0.0 && m < 1.0)) {
                throw std::invalid_argument("InnerSpec: zeros[" + std::to_string(i) +
                                            "] modulus must lie in (0,1)");
            }
            if (zeros[i].mult < 1) {
                throw std::invalid_argument("InnerSpec: zeros[" + std::to_string(i) +
                                            "].mult must be >= 1");
            }
        }
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (!(atoms[i].mass > 0.0) || !std::isfinite(atoms[i].mass)) {
                throw std::invalid_argument("InnerSpec: atoms[" + std::to_string(i) +
                                            "].mass must be > 0");
            }
            if (!std::isfinite(atoms[i].theta)) {
                throw std::invalid_argument("InnerSpec: atoms[" + std::to_string(i) +
                                            "].theta must be finite");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (atoms[i].theta == atoms[j].theta) {
                    throw std::invalid_argument("InnerSpec: atoms[" + std::to_string(i) +
                                                "].theta duplicates atoms[" + std::to_string(j) + "]");
                }
            }
        }
    }
};

namespace detail {

inline cplx blaschke_factor_value(cplx a, cplx z) {
    // unnormalized factor (a - z) / (1 - conj(a) z)
    return (a - z) / (1.0 - std::conj(a) * z);
}

inline cplx eval_impl(const InnerSpec& spec, cplx z) {
    cplx v = std::polar(1.0, spec.phase);
    for (unsigned k = 0; k < spec.monomial_order; ++k) v *= z;
    for (const auto& zero : spec.zeros) {
        const cplx norm = std::abs(zero.a) / zero.a;
        const cplx factor = norm * blaschke_factor_value(zero.a, z);
        for (unsigned k = 0; k < zero.mult; ++k) v *= factor;
    }
    for (const auto& atom : spec.atoms) {
        const cplx w = std::polar(1.0, atom.theta);
        v *= std::exp(-atom.mass * (w + z) / (w - z));
    }
    return v;
}

} // namespace detail

inline constexpr double kDiskEdgeTol = 1e-12;

// Evaluation strictly inside the disk.
inline cplx eval(const InnerSpec& spec, cplx z) {
    if (!(std::abs(z) <= 1.0 - kDiskEdgeTol)) {
        throw std::domain_error("eval: |z| must be <= 1 - 1e-12");
    }
    return detail::eval_impl(spec, z);
}

// Evaluator for oracle grids. Specs without atoms are rational and extend to
// the closed disk; atom kernels are singular at their boundary point, so those
// specs stay strictly inside.
inline std::function<cplx(cplx)> make_evaluator(const InnerSpec& spec) {
    const bool atoms = spec.has_atoms();
    return [spec, atoms](cplx z) {
        const double r = std::abs(z);
        if (atoms) {
            if (!(r <= 1.0 - kDiskEdgeTol)) {
                throw std::domain_error("evaluator: specs with atoms require |z| <= 1 - 1e-12");
            }
        } else if (!(r <= 1.0 + kDiskEdgeTol)) {
            throw std::domain_error("evaluator: |z| must be <= 1");
        }
        return detail::eval_impl(spec, z);
    };
}

// Taylor coefficients of one unnormalized factor (a - z)/(1 - conj(a) z):
// lambda_0 = a, lambda_n = (|a|^2 - 1) conj(a)^{n-1}. The certificate constant
// max(|a|, (1-|a|^2)/|a|) also covers the n = 0 entry when |a| > 1/sqrt(2).
inline CoeffSeq blaschke_factor_coeffs(cplx a, std::size_t M) {
    const double m = std::abs(a);
    if (!(m > 0.0 && m < 1.0)) {
        throw std::invalid_argument("blaschke_factor_coeffs: need 0 < |a| < 1");
    }
    std::vector<cplx> c(M + 1);
    c[0] = a;
    const cplx ac = std::conj(a);
    const double lead = m * m - 1.0;
    cplx p{1.0, 0.0};
    for (std::size_t n = 1; n <= M; ++n) {
        c[n] = lead * p;
        p *= ac;
    }
    const double C = std::max(m, (1.0 - m * m) / m) * (1.0 + 1e-9);
    return CoeffSeq(std::move(c), DecayCert(C, m));
}

// Per-index coefficient estimates recovered from samples of a disk function on
// the circle |z| = r, with the aliasing guarantee for |f| <= 1.
struct SampledCoeffs {
    CoeffSeq seq;                    // tail unknown by construction
    std::vector<double> alias_bound; // |hat(lambda)_n - lambda_n| <= alias_bound[n]
    double r = 0.0;
    std::size_t K = 0;
};

// r such that r^K = alias_target
inline double sample_radius(std::size_t K, double alias_target = 1e-8) {
    return std::exp(std::log(alias_target) / static_cast<double>(K));
}

template <typename F>
SampledCoeffs sample_coeffs(F&& f, std::size_t M, std::size_t K, double r) {
    if (K <= M) throw std::invalid_argument("sample_coeffs: need K > M");
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("sample_coeffs: need r in (0,1)");

    std::vector<cplx> samples(K);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t j = 0; j < K; ++j) {
        const cplx z = std::polar(r, two_pi * static_cast<double>(j) / static_cast<double>(K));
        samples[j] = f(z);
        if (!std::isfinite(samples[j].real()) || !std::isfinite(samples[j].imag())) {
            throw std::runtime_error("sample_coeffs: non-finite sample at j=" + std::to_string(j));
        }
        if (std::abs(samples[j]) > 1.0 + 1e-9) {
            throw std::invalid_argument("sample_coeffs: |f| exceeds 1 on the sampling circle");
        }
    }

    std::vector<cplx> hat;
    if ((K & (K - 1)) == 0) {
        detail::fft_radix2(samples, false);
        hat = std::move(samples);
        for (auto& x : hat) x /= static_cast<double>(K);
        hat.resize(M + 1);
    } else {
        hat.assign(M + 1, cplx(0.0, 0.0));
        for (std::size_t n = 0; n <= M; ++n) {
            cplx acc{0.0, 0.0};
            for (std::size_t j = 0; j < K; ++j) {
                const double ang = -two_pi * static_cast<double>(j * n % K) / static_cast<double>(K);
                acc += samples[j] * std::polar(1.0, ang);
            }
            hat[n] = acc / static_cast<double>(K);
        }
    }

    const double rK = std::pow(r, static_cast<double>(K));
    SampledCoeffs out{CoeffSeq(std::vector<cplx>(M + 1)), {}, r, K};
    std::vector<cplx> coeffs(M + 1);
    std::vector<double> bound(M + 1);
    double rn = 1.0;
    for (std::size_t n = 0; n <= M; ++n) {
        coeffs[n] = hat[n] / rn;
        bound[n] = rK / (rn * (1.0 - rK));
        rn *= r;
    }
    out.seq = CoeffSeq(std::move(coeffs));
    out.alias_bound = std::move(bound);
    return out;
}

namespace detail {

// Partial-fraction certificate for a product of simple, well-separated
// Blaschke factors: |lambda_n| <= (sum |B_i|) * (max |a_i|)^n for n >= 1.
inline std::optional<DecayCert> residue_cert(const std::vector<cplx>& zeros) {
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(zeros[i] - zeros[j]) < 1e-6) return std::nullopt;
        }
    }
    double rho = 0.0;
    cplx lambda0{1.0, 0.0};
    for (const auto& a : zeros) {
        rho = std::max(rho, std::abs(a));
        lambda0 *= a;
    }
    double sumB = 0.0;
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        const cplx p = 1.0 / std::conj(zeros[i]);
        cplx B = zeros[i] - p;
        for (std::size_t k = 0; k < zeros.size(); ++k) {
            if (k != i) B *= blaschke_factor_value(zeros[k], p);
        }
        sumB += std::abs(B);
    }
    if (!std::isfinite(sumB)) return std::nullopt;
    const double C = std::max(std::abs(lambda0), sumB) * (1.0 + 1e-9);
    return DecayCert(C, rho);
}

// Cauchy bound on a circle of radius between 1 and the closest pole 1/|a|;
// valid for repeated zeros as well.
inline DecayCert cauchy_cert(const std::vector<BlaschkeZero>& zeros) {
    double m = 0.0;
    for (const auto& z : zeros) m = std::max(m, std::abs(z.a));
    const double r = 0.5 * (1.0 + 1.0 / m);
    double C = 1.0;
    for (const auto& z : zeros) {
        const double am = std::abs(z.a);
        const double factor = (am + r) / (1.0 - am * r);
        for (unsigned k = 0; k < z.mult; ++k) C *= factor;
    }
    return DecayCert(C * (1.0 + 1e-9), 2.0 * m / (1.0 + m));
}

} // namespace detail

// Certificate spec_coeffs would attach: zeros-only specs only, monomial shift
// included. Specs with atoms have unknown tails.
inline std::optional<DecayCert> spec_decay_cert(const InnerSpec& spec) {
    if (spec.has_atoms()) return std::nullopt;
    std::optional<DecayCert> cert;
    if (spec.zeros.empty()) {
        cert = DecayCert(1.0 + 1e-9, 1e-3);
    } else {
        bool all_simple = true;
        std::vector<cplx> simple;
        for (const auto& z : spec.zeros) {
            if (z.mult != 1) all_simple = false;
            for (unsigned k = 0; k < z.mult; ++k) simple.push_back(z.a);
        }
        if (all_simple) cert = detail::residue_cert(simple);
        if (!cert) cert = detail::cauchy_cert(spec.zeros);
    }
    if (spec.monomial_order > 0 && cert) {
        const double C = cert->C / std::pow(cert->rho, static_cast<double>(spec.monomial_order));
        cert = std::isfinite(C) ? std::optional<DecayCert>(DecayCert(C, cert->rho)) : std::nullopt;
    }
    return cert;
}

// Taylor coefficients 0..M of the function described by spec. Zeros-only specs
// carry a certificate; atom contributions are sampled, so their tail is
// unknown. Convolution stays on the direct path: it keeps the rounding of the
// geometrically small high-order entries relative, which the certificate check
// requires.
inline CoeffSeq spec_coeffs(const InnerSpec& spec, std::size_t M,
                            std::size_t sample_count = 4096, double alias_target = 1e-8) {
    spec.validate();

    cplx scalar = std::polar(1.0, spec.phase);
    for (const auto& zero : spec.zeros) {
        const cplx norm = std::abs(zero.a) / zero.a;
        for (unsigned k = 0; k < zero.mult; ++k) scalar *= norm;
    }

    std::vector<cplx> acc{scalar};
    for (const auto& zero : spec.zeros) {
        for (unsigned k = 0; k < zero.mult; ++k) {
            auto factor = blaschke_factor_coeffs(zero.a, M);
            acc = detail::convolve_raw_direct(acc, factor.coeffs());
            if (acc.size() > M + 1) acc.resize(M + 1);
        }
    }

    if (spec.has_atoms()) {
        InnerSpec atoms_only;
        atoms_only.atoms = spec.atoms;
        std::size_t K = std::max<std::size_t>(sample_count, 16);
        if (M + 1 > K / 4) K = detail::next_pow2(4 * (M + 1));
        const auto sampled =
            sample_coeffs([&](cplx z) { return detail::eval_impl(atoms_only, z); }, M, K,
                          sample_radius(K, alias_target));
        acc = detail::convolve_raw_direct(acc, sampled.seq.coeffs());
        if (acc.size() > M + 1) acc.resize(M + 1);
        if (spec.monomial_order > 0) {
            acc.insert(acc.begin(), spec.monomial_order, cplx(0.0, 0.0));
            acc.resize(M + 1);
        }
        return CoeffSeq(std::move(acc)); // tail unknown
    }

    if (spec.monomial_order > 0) {
        acc.insert(acc.begin(), spec.monomial_order, cplx(0.0, 0.0));
        acc.resize(M + 1);
    } else if (acc.size() < M + 1) {
        acc.resize(M + 1, cplx(0.0, 0.0));
    }

    return CoeffSeq(std::move(acc), spec_decay_cert(spec));
}

} // namespace innerspace
