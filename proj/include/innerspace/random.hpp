#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace innerspace::detail {

// Seeded generator with a hand-rolled Box-Muller transform so that streams are
// identical across standard libraries (std distributions are not pinned).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform on (0,1]
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t integer(std::uint64_t n) { return gen_() % n; }

    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::complex<double> complex_gauss() {
        const double re = gauss();
        const double im = gauss();
        return {re, im};
    }

    std::vector<std::complex<double>> gaussian_tuple(std::size_t len) {
        std::vector<std::complex<double>> v(len);
        for (auto& x : v) x = complex_gauss();
        return v;
    }

    // complex Gaussian entries normalized to unit l2 norm
    std::vector<std::complex<double>> unit_tuple(std::size_t len) {
        auto v = gaussian_tuple(len);
        double s = 0.0;
        for (const auto& x : v) s += std::norm(x);
        const double inv = 1.0 / std::sqrt(s);
        for (auto& x : v) x *= inv;
        return v;
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace innerspace::detail
