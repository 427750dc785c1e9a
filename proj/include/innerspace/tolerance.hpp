#pragma once

#include <cstddef>
#include <cstdint>

namespace innerspace {

// Knobs shared by the criterion checks, membership tests and the CLI. A report
// always embeds the full config so its verdict can be reproduced.
struct ToleranceConfig {
    // residual tolerance when tails are certified vs unknown
    double residual_tol_certified = 1e-10;
    double residual_tol_unknown = 1e-6;

    std::size_t gram_max_lag = 16;   // N for the Gram defect scan
    std::size_t probe_trials = 16;
    std::size_t probe_tuple_len = 8;
    std::uint64_t seed = 0x5EED;

    std::size_t boundary_grid = 8192; // oracle sample count, power of two
    double leading_zero_tol = 1e-12;

    double membership_tol = 1e-9;     // reconstruction residual + norm stabilization
    double growth_delta = 0.05;       // per-step geometric growth threshold
    std::size_t membership_window = 128;

    std::size_t sample_count = 4096;  // K for disk-function coefficient sampling
    double alias_target = 1e-8;       // r chosen so r^K equals this
    double cert_tail_target = 1e-13;  // truncation order picked from a decay cert

    double effective_tol(bool certified_tail) const {
        return certified_tail ? residual_tol_certified : residual_tol_unknown;
    }
};

} // namespace innerspace
