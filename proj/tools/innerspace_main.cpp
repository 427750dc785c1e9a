// Command-line surface: construct inner-function coefficients, check the
// coefficient criteria, generate subspace elements and test membership.
// Exit codes: 0 ok/consistent/member, 3 refuted/nonmember, 4 inconclusive,
// 2 input or generator error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "innerspace/innerspace.hpp"

namespace {

using namespace innerspace;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitRefuted = 3;
constexpr int kExitInconclusive = 4;

struct CheckInnerOpts {
    std::string coeffs_path;
    std::string spec_path;
    std::int64_t order = -1;
    double tol = -1.0;
    std::size_t max_lag = 16;
    std::uint64_t seed = 0x5EED;
    std::size_t grid = 8192;
    bool json = false;
};

ToleranceConfig make_config(double tol, std::size_t max_lag, std::uint64_t seed,
                            std::size_t grid) {
    ToleranceConfig cfg;
    if (tol > 0.0) {
        cfg.residual_tol_certified = tol;
        cfg.residual_tol_unknown = tol;
    }
    cfg.gram_max_lag = max_lag;
    cfg.seed = seed;
    cfg.boundary_grid = grid;
    return cfg;
}

std::size_t auto_order(const InnerSpec& spec, const ToleranceConfig& cfg) {
    if (const auto cert = spec_decay_cert(spec)) {
        std::size_t M = cert->order_for_tail_sq(cfg.cert_tail_target, 65536);
        return std::max<std::size_t>(M, spec.monomial_order + spec.blaschke_degree() + 1);
    }
    return std::min<std::size_t>(1024, cfg.sample_count / 4);
}

OracleBlock oracle_for_spec(const InnerSpec& spec, const CoeffSeq& lambda,
                            const ToleranceConfig& cfg) {
    OracleBlock blk;
    blk.grid = cfg.boundary_grid;
    const auto f = make_evaluator(spec);
    const double r = spec.has_atoms() ? 1.0 - 1e-4 : 1.0;
    blk.modulus_radius = r;
    blk.boundary_norm = boundary_norm_sq(f, cfg.boundary_grid, r);
    blk.modulus_defect_value = modulus_defect(f, cfg.boundary_grid, r);
    const auto pc = parseval_crosscheck(lambda, f, cfg.boundary_grid, r);
    blk.parseval_discrepancy = pc.discrepancy;
    blk.parseval_tail = pc.tail_sq;
    blk.ladder = radial_ladder_check(f, cfg.boundary_grid);
    return blk;
}

void print_criterion_human(std::ostream& os, const CriterionReport& rep) {
    os << "verdict: " << (rep.refuted() ? "refuted" : "consistent") << "\n";
    os << "resolution: " << rep.resolution << "  tolerance: " << iodetail::fmt(rep.tolerance)
       << "  certified tail: " << (rep.certified_tail ? "yes" : "no") << "\n";
    os << "norm-one partial: " << iodetail::fmt(rep.norm_one.partial)
       << "  residual: " << iodetail::fmt(rep.norm_one.residual)
       << (rep.norm_one.pass ? "  (pass)" : "  (fail)") << "\n";
    os << "gram defect: " << iodetail::fmt(rep.gram.defect) << "  (lags <= " << rep.gram_lags
       << ")\n";
    os << "probe max residual: " << iodetail::fmt(rep.probes.max_residual) << "  ("
       << rep.probes.trials.size() << " trials)\n";
    os << "sup-norm grid max: " << iodetail::fmt(rep.probes.supnorm_grid) << "\n";
    if (rep.witness) {
        os << "witness: " << witness_kind_name(rep.witness->kind)
           << "  index: " << rep.witness->index
           << "  excess: " << iodetail::fmt(rep.witness->excess) << "\n";
    }
}

int run_make_inner(const std::string& spec_path, std::int64_t order, const std::string& out_path,
                   const ToleranceConfig& cfg) {
    const InnerSpec spec = load_inner_spec(spec_path);
    if (spec.ill_conditioned()) {
        std::cerr << "warning: zero modulus above 0.95 is ill-conditioned; "
                     "expect very large truncation orders\n";
    }
    const std::size_t M = order >= 0 ? static_cast<std::size_t>(order) : auto_order(spec, cfg);
    const CoeffSeq lambda = spec_coeffs(spec, M, cfg.sample_count, cfg.alias_target);
    write_coeff_csv(std::filesystem::path(out_path), lambda);
    std::cout << "wrote " << out_path << " (order " << M << ")\n";
    if (lambda.decay()) {
        std::cout << "decay cert: C=" << iodetail::fmt(lambda.decay()->C)
                  << " rho=" << iodetail::fmt(lambda.decay()->rho)
                  << " tail_sq<=" << iodetail::fmt(lambda.decay()->tail_sq(lambda.order()))
                  << "\n";
    } else {
        std::cout << "tail unknown\n";
    }
    return kExitOk;
}

int run_check_inner(const CheckInnerOpts& o) {
    ToleranceConfig cfg = make_config(o.tol, o.max_lag, o.seed, o.grid);
    std::optional<OracleBlock> oracle;
    std::vector<std::string> flags;
    std::optional<CoeffSeq> lambda;
    if (!o.spec_path.empty()) {
        const InnerSpec spec = load_inner_spec(o.spec_path);
        const std::size_t M =
            o.order >= 0 ? static_cast<std::size_t>(o.order) : auto_order(spec, cfg);
        lambda = spec_coeffs(spec, M, cfg.sample_count, cfg.alias_target);
        oracle = oracle_for_spec(spec, *lambda, cfg);
        if (spec.ill_conditioned()) flags.push_back("ill_conditioned_zero");
        if (spec.has_atoms()) flags.push_back("radial_proxy");
    } else {
        lambda = load_coeffs(o.coeffs_path);
    }
    const CriterionReport rep = classify(*lambda, cfg);
    if (o.json) {
        std::cout << criterion_report_json(rep, oracle, flags) << "\n";
    } else {
        print_criterion_human(std::cout, rep);
        if (oracle) {
            std::cout << "oracle boundary norm: " << iodetail::fmt(oracle->boundary_norm)
                      << "  modulus defect: " << iodetail::fmt(oracle->modulus_defect_value)
                      << " (r=" << iodetail::fmt(oracle->modulus_radius) << ")\n"
                      << "oracle parseval discrepancy: "
                      << iodetail::fmt(oracle->parseval_discrepancy) << "\n";
        }
    }
    return rep.refuted() ? kExitRefuted : kExitOk;
}

int run_check_member(const std::string& inner_path, const std::string& target_path, double tol,
                     std::size_t window, bool json, const ToleranceConfig& base) {
    ToleranceConfig cfg = base;
    if (tol > 0.0) cfg.membership_tol = tol;
    if (window > 0) cfg.membership_window = window;
    const CoeffSeq generator = load_coeffs(inner_path);
    const CoeffSeq target = load_coeffs(target_path);
    SubspaceHandle handle = [&] {
        try {
            return SubspaceHandle::create(generator, cfg);
        } catch (const RefutedGeneratorError& e) {
            std::cout << criterion_report_json(e.report()) << "\n";
            std::cerr << "error: generator refuted as inner\n";
            std::exit(kExitInput);
        }
    }();
    const MembershipReport rep = membership_test(handle, target, cfg);
    if (json) {
        std::cout << membership_report_json(rep) << "\n";
    } else {
        std::cout << "verdict: " << membership_verdict_name(rep.verdict) << "\n"
                  << "residual: " << iodetail::fmt(rep.residual) << "\n"
                  << "growth rate: "
                  << (rep.growth_rate ? iodetail::fmt(*rep.growth_rate) : std::string("n/a"))
                  << "\n"
                  << "window: " << rep.window << "\n";
    }
    switch (rep.verdict) {
        case MembershipVerdict::Member: return kExitOk;
        case MembershipVerdict::NonMember: return kExitRefuted;
        case MembershipVerdict::Inconclusive: return kExitInconclusive;
    }
    return kExitInput;
}

int run_gen_element(const std::string& inner_path, const std::string& c_path,
                    const std::string& out_path) {
    const CoeffSeq lambda = load_coeffs(inner_path);
    const CoeffSeq c = load_coeffs(c_path);
    write_coeff_csv(std::filesystem::path(out_path), convolve(lambda, c));
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"inner-function construction, certification and shift-invariant "
                 "subspace membership"};
    app.require_subcommand(1);

    // make-inner
    auto* mk = app.add_subcommand("make-inner", "expand a spec into a coefficient file");
    std::string mk_spec, mk_out;
    std::int64_t mk_order = -1;
    mk->add_option("spec", mk_spec, "inner-function spec (JSON)")->required();
    mk->add_option("--order", mk_order, "truncation order (default: from the decay cert)");
    mk->add_option("--out", mk_out, "output coefficient CSV")->required();

    // check-inner
    auto* ck = app.add_subcommand("check-inner", "run the coefficient criteria");
    CheckInnerOpts ck_opts;
    auto* ck_coeffs = ck->add_option("--coeffs", ck_opts.coeffs_path, "coefficient CSV");
    auto* ck_spec = ck->add_option("--spec", ck_opts.spec_path, "inner-function spec (JSON)");
    ck_coeffs->excludes(ck_spec);
    ck_spec->excludes(ck_coeffs);
    ck->add_option("--order", ck_opts.order, "truncation order for --spec");
    ck->add_option("--tol", ck_opts.tol, "residual tolerance override");
    ck->add_option("--max-N", ck_opts.max_lag, "Gram defect lag bound");
    ck->add_option("--seed", ck_opts.seed, "probe seed");
    ck->add_option("--grid", ck_opts.grid, "oracle grid size");
    ck->add_flag("--json", ck_opts.json, "emit the JSON report");

    // check-member
    auto* cm = app.add_subcommand("check-member", "test membership in the generated subspace");
    std::string cm_inner, cm_target;
    double cm_tol = -1.0;
    std::size_t cm_window = 0;
    bool cm_json = false;
    cm->add_option("--inner", cm_inner, "generator coefficient CSV")->required();
    cm->add_option("--target", cm_target, "target coefficient CSV")->required();
    cm->add_option("--tol", cm_tol, "membership tolerance");
    cm->add_option("--window", cm_window, "minimum deconvolution window");
    cm->add_flag("--json", cm_json, "emit the JSON report");

    // gen-element
    auto* ge = app.add_subcommand("gen-element", "convolve a generator with a preimage");
    std::string ge_inner, ge_c, ge_out;
    ge->add_option("--inner", ge_inner, "generator coefficient CSV")->required();
    ge->add_option("--c", ge_c, "preimage coefficient CSV")->required();
    ge->add_option("--out", ge_out, "output coefficient CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (mk->parsed()) {
            return run_make_inner(mk_spec, mk_order, mk_out, ToleranceConfig{});
        }
        if (ck->parsed()) {
            if (ck_opts.coeffs_path.empty() == ck_opts.spec_path.empty()) {
                std::cerr << "error: exactly one of --coeffs or --spec is required\n";
                return kExitInput;
            }
            return run_check_inner(ck_opts);
        }
        if (cm->parsed()) {
            return run_check_member(cm_inner, cm_target, cm_tol, cm_window, cm_json,
                                    ToleranceConfig{});
        }
        if (ge->parsed()) {
            return run_gen_element(ge_inner, ge_c, ge_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
