#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include "innerspace/seq.hpp"

namespace innerspace {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

namespace detail {

template <typename F>
cplx grid_sample(F&& f, std::size_t j, std::size_t K, double r) {
    const cplx z = std::polar(r, kTwoPi * static_cast<double>(j) / static_cast<double>(K));
    const cplx v = f(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw std::runtime_error("oracle: non-finite sample at grid index " + std::to_string(j) +
                                 " (r=" + std::to_string(r) + ")");
    }
    return v;
}

} // namespace detail

// Equal-weight trapezoid of |f|^2 over the circle of radius r; exact for
// trigonometric polynomials of degree < K, spectrally accurate for functions
// analytic past radius r.
template <typename F>
double boundary_norm_sq(F&& f, std::size_t K, double r = 1.0) {
    if (K < 16) throw std::invalid_argument("boundary_norm_sq: K must be >= 16");
    double acc = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
        acc += std::norm(detail::grid_sample(f, j, K, r));
    }
    return acc / static_cast<double>(K);
}

// max_j | |f(r e^{i theta_j})| - 1 |
template <typename F>
double modulus_defect(F&& f, std::size_t K, double r = 1.0) {
    if (K < 16) throw std::invalid_argument("modulus_defect: K must be >= 16");
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("modulus_defect: r must be in (0,1]");
    double worst = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
        worst = std::max(worst, std::abs(std::abs(detail::grid_sample(f, j, K, r)) - 1.0));
    }
    return worst;
}

struct ParsevalCheck {
    double coeff_side = 0.0;    // partial coefficient sum
    double boundary_side = 0.0; // trapezoid value
    double discrepancy = 0.0;
    std::optional<double> tail_sq; // from the sequence certificate, when present
};

// Agreement of the two norm expressions: sum |lambda_n|^2 against the boundary
// integral of the function the coefficients claim to represent.
template <typename F>
ParsevalCheck parseval_crosscheck(const CoeffSeq& lambda, F&& f, std::size_t K, double r = 1.0) {
    ParsevalCheck out;
    const auto est = l2_norm_sq(lambda);
    out.coeff_side = est.partial;
    out.tail_sq = est.tail_sq;
    out.boundary_side = boundary_norm_sq(f, K, r);
    out.discrepancy = std::abs(out.coeff_side - out.boundary_side);
    return out;
}

struct RadialLadder {
    std::array<double, 3> radii{};
    std::array<double, 3> bad_fraction{}; // share of grid points with defect > threshold
    double threshold = 0.0;
    bool pass = false;
};

// Boundary modulus check in measure for functions whose boundary evaluation is
// singular at isolated points: the bad fraction must shrink along a radius
// ladder approaching 1 and end small.
template <typename F>
RadialLadder radial_ladder_check(F&& f, std::size_t K, double threshold = 1e-6,
                                 std::array<double, 3> radii = {1.0 - 1e-4, 1.0 - 1e-6,
                                                                1.0 - 1e-8}) {
    if (K < 16) throw std::invalid_argument("radial_ladder_check: K must be >= 16");
    RadialLadder out;
    out.radii = radii;
    out.threshold = threshold;
    for (std::size_t step = 0; step < radii.size(); ++step) {
        std::size_t bad = 0;
        for (std::size_t j = 0; j < K; ++j) {
            const double defect =
                std::abs(std::abs(detail::grid_sample(f, j, K, radii[step])) - 1.0);
            if (defect > threshold) ++bad;
        }
        out.bad_fraction[step] = static_cast<double>(bad) / static_cast<double>(K);
    }
    out.pass = out.bad_fraction[0] >= out.bad_fraction[1] &&
               out.bad_fraction[1] >= out.bad_fraction[2] && out.bad_fraction[2] <= 0.1;
    return out;
}

// Horner evaluation of the stored polynomial part.
inline cplx eval_poly(const CoeffSeq& s, cplx z) {
    cplx acc{0.0, 0.0};
    for (std::size_t n = s.size(); n-- > 0;) acc = acc * z + s[n];
    return acc;
}

inline auto make_poly_evaluator(const CoeffSeq& s) {
    return [s](cplx z) { return eval_poly(s, z); };
}

// max over the boundary grid of |sum lambda_n z^n|
inline double poly_boundary_sup(const CoeffSeq& s, std::size_t K) {
    if (K < 16) throw std::invalid_argument("poly_boundary_sup: K must be >= 16");
    double sup = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
        const cplx z = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(K));
        sup = std::max(sup, std::abs(eval_poly(s, z)));
    }
    return sup;
}

} // namespace innerspace
