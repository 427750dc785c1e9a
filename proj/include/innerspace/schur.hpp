#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "innerspace/oracle.hpp"
#include "innerspace/random.hpp"
#include "innerspace/seq.hpp"
#include "innerspace/tolerance.hpp"

namespace innerspace {

// |sum |lambda_n|^2 - 1| with the decay-certified tail. Failure is one-sided:
// a partial sum above 1 refutes outright, a shortfall refutes only when the
// certificate caps the tail below the deficit.
struct NormOneResult {
    double partial = 0.0;
    std::optional<double> tail_sq;
    double residual = 0.0;
    bool pass = false;
    // positive certified margin by which the unit-norm identity is violated
    double excess = 0.0;
};

inline NormOneResult norm_one_check(const CoeffSeq& lambda, double tol) {
    NormOneResult out;
    const auto est = l2_norm_sq(lambda);
    out.partial = est.partial;
    out.tail_sq = est.tail_sq;
    out.residual = std::abs(est.partial - 1.0);
    out.excess = std::max(0.0, est.partial - 1.0);
    if (est.tail_sq) {
        out.excess = std::max(out.excess, 1.0 - (est.partial + *est.tail_sq));
    }
    out.pass = out.excess <= tol;
    return out;
}

struct CondDResult {
    double lhs_partial = 0.0;
    std::optional<double> tail_bound;
    double rhs = 0.0;
    double residual = 0.0;
};

// Truncated left side of the degree-N quadratic identity: the full l2 mass of
// the product sequence lambda * a over its stored window. The tail bound comes
// from lambda's certificate scaled by ||a||_2 (Cauchy-Schwarz across the
// tuple).
inline CondDResult condition_d_residual(const CoeffSeq& lambda, const std::vector<cplx>& tuple) {
    if (tuple.empty()) throw std::invalid_argument("condition_d_residual: tuple must be non-empty");
    CondDResult out;
    const CoeffSeq f = CoeffSeq::polynomial(tuple);
    const CoeffSeq prod = convolve(lambda, f);
    for (const auto& c : prod.coeffs()) out.lhs_partial += std::norm(c);
    for (const auto& a : tuple) out.rhs += std::norm(a);
    out.residual = std::abs(out.lhs_partial - out.rhs);
    if (lambda.decay()) {
        const auto& d = *lambda.decay();
        const std::size_t M = lambda.order();
        const std::size_t N = tuple.size() - 1;
        const double r2 = d.rho * d.rho;
        const double p = std::pow(d.rho, static_cast<double>(M + 1));
        out.tail_bound = out.rhs * d.C * d.C * p * p *
                         (1.0 - std::pow(r2, static_cast<double>(N + 1))) /
                         ((1.0 - r2) * (1.0 - r2));
    }
    return out;
}

struct CondCResult {
    double lhs_partial = 0.0; // ||lambda * f||^2, stored window
    std::optional<double> lhs_tail;
    double rhs_partial = 0.0; // ||f||^2, stored window
    std::optional<double> rhs_tail;
    double residual = 0.0;

    // certified positive violation of the isometry identity; 0 when the
    // intervals still overlap
    double excess() const {
        double e = 0.0;
        if (rhs_tail) e = std::max(e, lhs_partial - (rhs_partial + *rhs_tail));
        if (lhs_tail) e = std::max(e, rhs_partial - (lhs_partial + *lhs_tail));
        return e;
    }
};

inline CondCResult condition_c_residual(const CoeffSeq& lambda, const CoeffSeq& f) {
    CondCResult out;
    const auto lhs = l2_norm_sq(convolve(lambda, f));
    const auto rhs = l2_norm_sq(f);
    out.lhs_partial = lhs.partial;
    out.lhs_tail = lhs.tail_sq;
    out.rhs_partial = rhs.partial;
    out.rhs_tail = rhs.tail_sq;
    out.residual = std::abs(lhs.partial - rhs.partial);
    return out;
}

// Gram matrix of shifted copies, G[j][k] = <S^j lambda, S^k lambda> assembled
// from running correlations; identity exactly when the quadratic identities
// hold at every degree.
inline std::vector<std::vector<cplx>> gram_matrix(const CoeffSeq& lambda, std::size_t N) {
    std::vector<cplx> r(N + 1, cplx(0.0, 0.0));
    for (std::size_t m = 0; m <= N && m < lambda.size(); ++m) {
        r[m] = correlate(lambda, m).value;
    }
    std::vector<std::vector<cplx>> G(N + 1, std::vector<cplx>(N + 1));
    for (std::size_t j = 0; j <= N; ++j) {
        for (std::size_t k = 0; k <= N; ++k) {
            G[j][k] = j >= k ? r[j - k] : std::conj(r[k - j]);
        }
    }
    return G;
}

struct GramDefect {
    double defect = 0.0;         // max |G_jk - delta_jk| over stored lags
    double certified_excess = 0.0;
    std::size_t worst_lag = 0;
    double worst_tail_radius = 0.0;
};

inline GramDefect gram_defect(const CoeffSeq& lambda, std::size_t N) {
    GramDefect out;
    for (std::size_t m = 0; m <= N && m < lambda.size(); ++m) {
        const auto corr = correlate(lambda, m);
        const double dev = std::abs(corr.value - (m == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0)));
        if (dev > out.defect) {
            out.defect = dev;
            out.worst_lag = m;
            out.worst_tail_radius = corr.tail_radius.value_or(0.0);
        }
        if (corr.tail_radius) {
            out.certified_excess = std::max(out.certified_excess, dev - *corr.tail_radius);
        } else if (m == 0) {
            // diagonal partial sums only grow, so an overshoot needs no tail
            out.certified_excess = std::max(out.certified_excess, corr.value.real() - 1.0);
        }
    }
    return out;
}

struct ProbeTrial {
    std::size_t index = 0;
    double residual = 0.0;
    double excess = 0.0;
    std::vector<cplx> tuple;
};

struct ProbeResult {
    double max_residual = 0.0;
    double max_excess = 0.0;
    std::size_t worst_trial = 0;
    std::vector<ProbeTrial> trials;
    double supnorm_grid = 0.0;          // max |partial Taylor sum| on the boundary grid
    std::optional<double> supnorm_tail; // l1 tail of the coefficients, when certified
};

// Random-polynomial probes of the isometric-multiplier identity plus a grid
// estimate of the sup norm for the squeeze between the l2 and sup norms.
inline ProbeResult isometry_probe(const CoeffSeq& lambda, std::size_t trials, std::uint64_t seed,
                                  std::size_t tuple_len = 8, std::size_t grid = 8192) {
    if (trials < 1) throw std::invalid_argument("isometry_probe: trials must be >= 1");
    if (tuple_len < 1) throw std::invalid_argument("isometry_probe: tuple_len must be >= 1");
    ProbeResult out;
    detail::Rng rng(seed);
    out.trials.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        ProbeTrial trial;
        trial.index = t;
        trial.tuple = rng.unit_tuple(tuple_len);
        const auto res = condition_c_residual(lambda, CoeffSeq::polynomial(trial.tuple));
        trial.residual = res.residual;
        trial.excess = res.excess();
        if (trial.residual > out.max_residual) {
            out.max_residual = trial.residual;
            out.worst_trial = t;
        }
        out.max_excess = std::max(out.max_excess, trial.excess);
        out.trials.push_back(std::move(trial));
    }
    out.supnorm_grid = poly_boundary_sup(lambda, grid);
    if (lambda.decay()) out.supnorm_tail = lambda.decay()->tail_abs(lambda.order());
    return out;
}

enum class Verdict { RefutedInner, ConsistentInner };

struct Witness {
    enum class Kind { NormOne, Gram, Probe, SupNorm };
    Kind kind = Kind::NormOne;
    std::size_t index = 0; // gram lag or probe trial
    double residual = 0.0;
    double bound = 0.0; // tail bound/radius the residual certifiably exceeds
    double excess = 0.0;
    std::vector<cplx> tuple; // probe tuple, when applicable
};

inline const char* witness_kind_name(Witness::Kind k) {
    switch (k) {
        case Witness::Kind::NormOne: return "norm_one";
        case Witness::Kind::Gram: return "gram";
        case Witness::Kind::Probe: return "isometry_probe";
        case Witness::Kind::SupNorm: return "sup_norm";
    }
    return "unknown";
}

// One-sided classification: finitely many checks can refute but never prove,
// so the passing verdict records the resolution and tolerance it holds at.
struct CriterionReport {
    Verdict verdict = Verdict::ConsistentInner;
    std::size_t resolution = 0; // highest coefficient index examined
    double tolerance = 0.0;
    bool certified_tail = false;
    NormOneResult norm_one;
    GramDefect gram;
    std::size_t gram_lags = 0;
    ProbeResult probes;
    std::optional<Witness> witness;
    ToleranceConfig config;

    bool refuted() const noexcept { return verdict == Verdict::RefutedInner; }
};

inline CriterionReport classify(const CoeffSeq& lambda, const ToleranceConfig& cfg = {}) {
    CriterionReport rep;
    rep.config = cfg;
    rep.resolution = lambda.order();
    rep.certified_tail = lambda.decay().has_value();
    rep.tolerance = cfg.effective_tol(rep.certified_tail);
    const double tol = rep.tolerance;

    rep.norm_one = norm_one_check(lambda, tol);

    rep.gram_lags = cfg.gram_max_lag;
    rep.gram = gram_defect(lambda, cfg.gram_max_lag);

    rep.probes = isometry_probe(lambda, cfg.probe_trials, cfg.seed, cfg.probe_tuple_len,
                                cfg.boundary_grid);

    // refutations in a fixed order; each is certified, so extending the list
    // can only move Consistent -> Refuted, never back
    if (!rep.norm_one.pass) {
        Witness w;
        w.kind = Witness::Kind::NormOne;
        w.residual = rep.norm_one.residual;
        w.bound = rep.norm_one.tail_sq.value_or(0.0);
        w.excess = rep.norm_one.excess;
        rep.witness = w;
    } else if (rep.gram.certified_excess > tol) {
        Witness w;
        w.kind = Witness::Kind::Gram;
        w.index = rep.gram.worst_lag;
        w.residual = rep.gram.defect;
        w.bound = rep.gram.worst_tail_radius;
        w.excess = rep.gram.certified_excess;
        rep.witness = w;
    } else if (rep.probes.max_excess > tol) {
        for (const auto& t : rep.probes.trials) {
            if (t.excess > tol) {
                Witness w;
                w.kind = Witness::Kind::Probe;
                w.index = t.index;
                w.residual = t.residual;
                w.excess = t.excess;
                w.tuple = t.tuple;
                rep.witness = w;
                break;
            }
        }
    } else if (rep.probes.supnorm_tail &&
               rep.probes.supnorm_grid - *rep.probes.supnorm_tail > 1.0 + tol) {
        Witness w;
        w.kind = Witness::Kind::SupNorm;
        w.residual = rep.probes.supnorm_grid;
        w.bound = *rep.probes.supnorm_tail;
        w.excess = rep.probes.supnorm_grid - *rep.probes.supnorm_tail - 1.0;
        rep.witness = w;
    }

    rep.verdict = rep.witness ? Verdict::RefutedInner : Verdict::ConsistentInner;
    return rep;
}

} // namespace innerspace
