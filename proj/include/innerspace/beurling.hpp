#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "innerspace/schur.hpp"
#include "innerspace/seq.hpp"
#include "innerspace/tolerance.hpp"

namespace innerspace {

class RefutedGeneratorError : public std::runtime_error {
public:
    RefutedGeneratorError(std::string msg, CriterionReport report)
        : std::runtime_error(std::move(msg)), report_(std::move(report)) {}
    const CriterionReport& report() const noexcept { return report_; }

private:
    CriterionReport report_;
};

inline std::size_t leading_zero_count(const CoeffSeq& s, double tol) {
    std::size_t m = 0;
    while (m < s.size() && std::abs(s[m]) <= tol) ++m;
    return m;
}

// Handle on the sequential subspace generated by an inner coefficient
// sequence. Construction validates the generator; refuted generators are never
// wrapped.
class SubspaceHandle {
public:
    static SubspaceHandle create(CoeffSeq generator, const ToleranceConfig& cfg = {}) {
        CriterionReport report = classify(generator, cfg);
        if (report.refuted()) {
            throw RefutedGeneratorError("SubspaceHandle: generator refuted as inner",
                                        std::move(report));
        }
        const std::size_t m = leading_zero_count(generator, cfg.leading_zero_tol);
        if (m == generator.size()) {
            throw std::invalid_argument("SubspaceHandle: generator is numerically zero");
        }
        return SubspaceHandle(std::move(generator), std::move(report), m, cfg);
    }

    const CoeffSeq& generator() const noexcept { return generator_; }
    const CriterionReport& report() const noexcept { return report_; }
    std::size_t leading_zeros() const noexcept { return leading_zeros_; }
    const ToleranceConfig& config() const noexcept { return config_; }

private:
    SubspaceHandle(CoeffSeq g, CriterionReport r, std::size_t m, ToleranceConfig cfg)
        : generator_(std::move(g)), report_(std::move(r)), leading_zeros_(m), config_(cfg) {}

    CoeffSeq generator_;
    CriterionReport report_;
    std::size_t leading_zeros_;
    ToleranceConfig config_;
};

// Element of the subspace: the convolution (sum_k lambda_k c_{n-k})_n.
inline CoeffSeq generate_element(const SubspaceHandle& h, const CoeffSeq& c) {
    return convolve(h.generator(), c);
}

struct Deconvolution {
    CoeffSeq preimage;                         // recovered c
    std::size_t leading_zeros = 0;             // m used for the solve
    std::optional<std::size_t> mismatch_index; // g has mass before index m
    bool ill_conditioned = false;              // |lambda_m| < 1e-6
};

// Forward substitution on the lower-triangular Toeplitz system lambda * c = g.
// Exact on the truncation window in exact arithmetic; for targets outside the
// subspace the recurrence diverges geometrically, and that growth is the
// non-membership signal.
inline Deconvolution deconvolve(const CoeffSeq& lambda, const CoeffSeq& g,
                                double leading_tol = 1e-12) {
    const std::size_t m = leading_zero_count(lambda, leading_tol);
    if (m == lambda.size()) {
        throw std::invalid_argument("deconvolve: generator is numerically zero");
    }
    Deconvolution out{CoeffSeq(std::vector<cplx>{cplx(0.0, 0.0)}), m, std::nullopt, false};
    out.ill_conditioned = std::abs(lambda[m]) < 1e-6;

    for (std::size_t k = 0; k < m && k < g.size(); ++k) {
        if (std::abs(g[k]) > leading_tol) {
            out.mismatch_index = k;
            return out;
        }
    }
    if (g.size() <= m) return out; // nothing left to solve; zero preimage

    const std::size_t window = g.size() - m;
    std::vector<cplx> c(window, cplx(0.0, 0.0));
    const cplx pivot = lambda[m];
    for (std::size_t n = 0; n < window; ++n) {
        cplx acc = g[n + m];
        const std::size_t kmax = std::min(n, lambda.size() - 1 - m);
        for (std::size_t k = 1; k <= kmax; ++k) {
            acc -= lambda[m + k] * c[n - k];
        }
        c[n] = acc / pivot;
    }
    out.preimage = CoeffSeq(std::move(c));
    return out;
}

enum class MembershipVerdict { Member, NonMember, Inconclusive };

struct MembershipReport {
    MembershipVerdict verdict = MembershipVerdict::Inconclusive;
    CoeffSeq preimage{std::vector<cplx>{cplx(0.0, 0.0)}};
    std::vector<double> partial_norms; // running sum of |c_n|^2
    double residual = 0.0;             // ||g - lambda * c|| on the overlap window
    std::size_t window = 0;
    std::size_t leading_zeros = 0;
    std::optional<std::size_t> mismatch_index;
    std::optional<double> growth_rate; // exp of the log-magnitude slope, last half
    double stabilization_ratio = 1.0;  // last-quarter growth of the partial norms
    bool ill_conditioned = false;
    ToleranceConfig config;
};

namespace detail {

// least-squares slope of log|c_n| over the index range [lo, hi)
inline std::optional<double> log_growth_slope(const std::vector<cplx>& c, std::size_t lo,
                                              std::size_t hi) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t n = lo; n < hi; ++n) {
        const double a = std::abs(c[n]);
        if (a > 1e-300 && std::isfinite(a)) {
            pts.emplace_back(static_cast<double>(n), std::log(a));
        }
    }
    if (pts.size() < 4) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    return (n * sxy - sx * sy) / denom;
}

} // namespace detail

// Deconvolution-based membership test. The working window extends the target
// with zeros up to the configured minimum, treating the stored coefficients as
// the whole sequence; the report carries everything needed to rerun larger.
inline MembershipReport membership_test(const SubspaceHandle& h, const CoeffSeq& g,
                                        const ToleranceConfig& cfg = {}) {
    MembershipReport rep;
    rep.config = cfg;
    const CoeffSeq& lambda = h.generator();

    std::vector<cplx> gp = g.coeffs();
    if (gp.size() < cfg.membership_window) gp.resize(cfg.membership_window, cplx(0.0, 0.0));
    const CoeffSeq target(std::move(gp));

    auto dec = deconvolve(lambda, target, cfg.leading_zero_tol);
    rep.preimage = dec.preimage;
    rep.leading_zeros = dec.leading_zeros;
    rep.mismatch_index = dec.mismatch_index;
    rep.ill_conditioned = dec.ill_conditioned;
    rep.window = target.size();

    if (dec.mismatch_index) {
        // forced leading zeros are missing from g; no preimage can exist
        rep.verdict = MembershipVerdict::NonMember;
        rep.residual = std::abs(g[*dec.mismatch_index]);
        return rep;
    }

    const auto& c = rep.preimage.coeffs();
    bool overflow = false;
    rep.partial_norms.reserve(c.size());
    double acc = 0.0;
    for (const auto& x : c) {
        acc += std::norm(x);
        if (!std::isfinite(acc)) overflow = true;
        rep.partial_norms.push_back(acc);
    }

    // reconstruction residual over the stored window of the target
    {
        const CoeffSeq recon = convolve(lambda, rep.preimage);
        double rsq = 0.0;
        for (std::size_t n = 0; n < target.size(); ++n) {
            const cplx r = target[n] - (n < recon.size() ? recon[n] : cplx(0.0, 0.0));
            rsq += std::norm(r);
        }
        rep.residual = std::sqrt(rsq);
        if (!std::isfinite(rep.residual)) overflow = true;
    }

    const std::size_t W = c.size();
    const auto slope = detail::log_growth_slope(c, W / 2, W);
    if (slope) rep.growth_rate = std::exp(*slope);

    double early_max = 0.0, late_max = 0.0;
    for (std::size_t n = 0; n < W; ++n) {
        const double a = std::abs(c[n]);
        (n < W / 2 ? early_max : late_max) = std::max(n < W / 2 ? early_max : late_max, a);
    }

    const std::size_t q = (3 * W) / 4;
    if (q > 0 && q < W && rep.partial_norms[q - 1] > 0.0) {
        rep.stabilization_ratio = rep.partial_norms[W - 1] / rep.partial_norms[q - 1];
    }

    // growth is divergence evidence only when it dominates the recovered
    // signal, not when it is trailing float noise riding the recurrence
    const bool growing =
        overflow || (slope && *slope > std::log1p(cfg.growth_delta) && late_max > early_max);

    if (growing) {
        rep.verdict = MembershipVerdict::NonMember;
    } else if (rep.residual <= cfg.membership_tol &&
               rep.stabilization_ratio <= 1.0 + cfg.membership_tol) {
        rep.verdict = MembershipVerdict::Member;
    } else {
        rep.verdict = MembershipVerdict::Inconclusive;
    }
    return rep;
}

struct ShiftInvarianceProbe {
    double max_residual = 0.0;       // worst reconstruction residual
    double max_recovery_error = 0.0; // worst deviation from the shifted preimage
    bool all_member = true;
    std::size_t trials = 0;
};

// For random c: the shifted element shift(generate(c),1) must test as Member
// and deconvolve back to shift(c,1).
inline ShiftInvarianceProbe shift_invariance_probe(const SubspaceHandle& h, std::size_t trials,
                                                   std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("shift_invariance_probe: trials must be >= 1");
    ShiftInvarianceProbe out;
    out.trials = trials;
    detail::Rng rng(seed);
    const auto& cfg = h.config();
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t len = 8 + rng.integer(25);
        const CoeffSeq c = CoeffSeq::polynomial(rng.unit_tuple(len));
        const CoeffSeq shifted = shift(generate_element(h, c), 1);
        const auto rep = membership_test(h, shifted, cfg);
        out.max_residual = std::max(out.max_residual, rep.residual);
        if (rep.verdict != MembershipVerdict::Member) out.all_member = false;
        const CoeffSeq expect = shift(c, 1);
        for (std::size_t n = 0; n < expect.size() && n < rep.preimage.size(); ++n) {
            out.max_recovery_error =
                std::max(out.max_recovery_error, std::abs(rep.preimage[n] - expect[n]));
        }
    }
    return out;
}

} // namespace innerspace
