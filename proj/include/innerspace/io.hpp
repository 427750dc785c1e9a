#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "innerspace/beurling.hpp"
#include "innerspace/inner.hpp"
#include "innerspace/oracle.hpp"
#include "innerspace/schur.hpp"
#include "innerspace/seq.hpp"

namespace innerspace {

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SpecParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace iodetail {

// fixed 17-significant-digit rendering so identical runs emit identical bytes
inline std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string fmt_json(double x) {
    if (!std::isfinite(x)) return "null";
    return fmt(x);
}

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

inline double parse_double(const std::string& tok, std::size_t line, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw CsvError("line " + std::to_string(line) + ": cannot parse " + what + " '" + tok + "'");
    }
    if (pos != tok.size()) {
        throw CsvError("line " + std::to_string(line) + ": trailing characters in " + what + " '" +
                       tok + "'");
    }
    if (!std::isfinite(v)) {
        throw CsvError("line " + std::to_string(line) + ": non-finite " + what);
    }
    return v;
}

} // namespace iodetail

// Shared coefficient interchange: header `n,re,im`, rows in increasing n from
// 0 with no gaps or duplicates.
inline void write_coeff_csv(std::ostream& os, const CoeffSeq& s) {
    os << "n,re,im\n";
    for (std::size_t n = 0; n < s.size(); ++n) {
        os << n << ',' << iodetail::fmt(s[n].real()) << ',' << iodetail::fmt(s[n].imag()) << '\n';
    }
}

inline void write_coeff_csv(const std::filesystem::path& path, const CoeffSeq& s) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    write_coeff_csv(os, s);
}

inline std::vector<cplx> read_coeff_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw CsvError("line 1: empty input, expected header n,re,im");
    if (iodetail::trim(line) != "n,re,im") {
        throw CsvError("line 1: expected header 'n,re,im', got '" + iodetail::trim(line) + "'");
    }
    std::vector<cplx> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = iodetail::trim(line);
        if (t.empty()) {
            // only a trailing blank line is tolerated
            if (is.peek() != std::char_traits<char>::eof()) {
                throw CsvError("line " + std::to_string(lineno) + ": blank line inside data");
            }
            break;
        }
        std::vector<std::string> tok;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = t.find(',', start);
            if (comma == std::string::npos) {
                tok.push_back(t.substr(start));
                break;
            }
            tok.push_back(t.substr(start, comma - start));
            start = comma + 1;
        }
        if (tok.size() != 3) {
            throw CsvError("line " + std::to_string(lineno) + ": expected 3 fields, got " +
                           std::to_string(tok.size()));
        }
        long n = 0;
        try {
            std::size_t pos = 0;
            n = std::stol(tok[0], &pos);
            if (pos != tok[0].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw CsvError("line " + std::to_string(lineno) + ": cannot parse index '" + tok[0] +
                           "'");
        }
        const long expected = static_cast<long>(out.size());
        if (n < expected) {
            throw CsvError("line " + std::to_string(lineno) + ": duplicate or non-monotone index " +
                           std::to_string(n) + " (expected " + std::to_string(expected) + ")");
        }
        if (n > expected) {
            throw CsvError("line " + std::to_string(lineno) + ": gap in indices, expected " +
                           std::to_string(expected) + " but found " + std::to_string(n));
        }
        const double re = iodetail::parse_double(tok[1], lineno, "re");
        const double im = iodetail::parse_double(tok[2], lineno, "im");
        out.emplace_back(re, im);
    }
    if (out.empty()) throw CsvError("line 1: no coefficient rows");
    return out;
}

inline std::vector<cplx> read_coeff_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw CsvError("cannot open: " + path.string());
    return read_coeff_csv(is);
}

// A coefficient file holds the whole finite sequence; absent rows are zero.
inline CoeffSeq load_coeffs(const std::filesystem::path& path) {
    return CoeffSeq::polynomial(read_coeff_csv(path));
}

// InnerSpec JSON: {"phase":.., "monomial_order":.., "zeros":[{"re","im","mult"}],
// "atoms":[{"theta","mass"}]}; every field optional.
inline InnerSpec parse_inner_spec(const nlohmann::json& j) {
    if (!j.is_object()) throw SpecParseError("spec: top level must be an object");
    InnerSpec spec;
    for (const auto& [key, value] : j.items()) {
        if (key == "phase") {
            if (!value.is_number()) throw SpecParseError("spec: phase must be a number");
            spec.phase = value.get<double>();
        } else if (key == "monomial_order") {
            if (!value.is_number_unsigned()) {
                throw SpecParseError("spec: monomial_order must be a non-negative integer");
            }
            spec.monomial_order = value.get<unsigned>();
        } else if (key == "zeros") {
            if (!value.is_array()) throw SpecParseError("spec: zeros must be an array");
            for (std::size_t i = 0; i < value.size(); ++i) {
                const auto& z = value[i];
                const std::string at = "spec: zeros[" + std::to_string(i) + "]";
                if (!z.is_object()) throw SpecParseError(at + " must be an object");
                BlaschkeZero bz;
                double re = 0.0, im = 0.0;
                for (const auto& [zk, zv] : z.items()) {
                    if (zk == "re") {
                        if (!zv.is_number()) throw SpecParseError(at + ".re must be a number");
                        re = zv.get<double>();
                    } else if (zk == "im") {
                        if (!zv.is_number()) throw SpecParseError(at + ".im must be a number");
                        im = zv.get<double>();
                    } else if (zk == "mult") {
                        if (!zv.is_number_unsigned() || zv.get<unsigned>() < 1) {
                            throw SpecParseError(at + ".mult must be a positive integer");
                        }
                        bz.mult = zv.get<unsigned>();
                    } else {
                        throw SpecParseError(at + ": unknown field '" + zk + "'");
                    }
                }
                bz.a = cplx(re, im);
                spec.zeros.push_back(bz);
            }
        } else if (key == "atoms") {
            if (!value.is_array()) throw SpecParseError("spec: atoms must be an array");
            for (std::size_t i = 0; i < value.size(); ++i) {
                const auto& a = value[i];
                const std::string at = "spec: atoms[" + std::to_string(i) + "]";
                if (!a.is_object()) throw SpecParseError(at + " must be an object");
                SingularAtom atom;
                for (const auto& [ak, av] : a.items()) {
                    if (ak == "theta") {
                        if (!av.is_number()) throw SpecParseError(at + ".theta must be a number");
                        atom.theta = av.get<double>();
                    } else if (ak == "mass") {
                        if (!av.is_number()) throw SpecParseError(at + ".mass must be a number");
                        atom.mass = av.get<double>();
                    } else {
                        throw SpecParseError(at + ": unknown field '" + ak + "'");
                    }
                }
                spec.atoms.push_back(atom);
            }
        } else {
            throw SpecParseError("spec: unknown field '" + key + "'");
        }
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw SpecParseError(std::string("spec: ") + e.what());
    }
    return spec;
}

inline InnerSpec load_inner_spec(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw SpecParseError("cannot open: " + path.string());
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw SpecParseError("spec: invalid JSON: " + std::string(e.what()));
    }
    return parse_inner_spec(j);
}

// ---- report serialization -------------------------------------------------
// Hand-built emitters: fixed key order and fixed float formatting keep byte
// output identical across runs.

namespace iodetail {

inline std::string opt(const std::optional<double>& v) { return v ? fmt_json(*v) : "null"; }

inline void emit_config(std::ostream& os, const ToleranceConfig& c) {
    os << "{\"residual_tol_certified\":" << fmt_json(c.residual_tol_certified)
       << ",\"residual_tol_unknown\":" << fmt_json(c.residual_tol_unknown)
       << ",\"gram_max_lag\":" << c.gram_max_lag << ",\"probe_trials\":" << c.probe_trials
       << ",\"probe_tuple_len\":" << c.probe_tuple_len << ",\"seed\":" << c.seed
       << ",\"boundary_grid\":" << c.boundary_grid
       << ",\"leading_zero_tol\":" << fmt_json(c.leading_zero_tol)
       << ",\"membership_tol\":" << fmt_json(c.membership_tol)
       << ",\"growth_delta\":" << fmt_json(c.growth_delta)
       << ",\"membership_window\":" << c.membership_window
       << ",\"sample_count\":" << c.sample_count
       << ",\"alias_target\":" << fmt_json(c.alias_target)
       << ",\"cert_tail_target\":" << fmt_json(c.cert_tail_target) << "}";
}

} // namespace iodetail

struct OracleBlock {
    double boundary_norm = 0.0;
    double modulus_defect_value = 0.0;
    double modulus_radius = 1.0;
    double parseval_discrepancy = 0.0;
    std::optional<double> parseval_tail;
    std::size_t grid = 0;
    std::optional<RadialLadder> ladder;
};

inline std::string criterion_report_json(const CriterionReport& rep,
                                         const std::optional<OracleBlock>& oracle = std::nullopt,
                                         const std::vector<std::string>& flags = {}) {
    std::ostringstream os;
    os << "{\"verdict\":\"" << (rep.refuted() ? "refuted" : "consistent") << "\"";
    os << ",\"resolution\":" << rep.resolution;
    os << ",\"tolerance\":" << iodetail::fmt_json(rep.tolerance);
    os << ",\"certified_tail\":" << (rep.certified_tail ? "true" : "false");
    os << ",\"norm_one\":{\"partial\":" << iodetail::fmt_json(rep.norm_one.partial)
       << ",\"tail_sq\":" << iodetail::opt(rep.norm_one.tail_sq)
       << ",\"residual\":" << iodetail::fmt_json(rep.norm_one.residual)
       << ",\"pass\":" << (rep.norm_one.pass ? "true" : "false") << "}";
    os << ",\"gram_defect\":" << iodetail::fmt_json(rep.gram.defect);
    os << ",\"gram_lags\":" << rep.gram_lags;
    os << ",\"witness\":";
    if (rep.witness) {
        const auto& w = *rep.witness;
        os << "{\"kind\":\"" << witness_kind_name(w.kind) << "\",\"index\":" << w.index
           << ",\"residual\":" << iodetail::fmt_json(w.residual)
           << ",\"bound\":" << iodetail::fmt_json(w.bound)
           << ",\"excess\":" << iodetail::fmt_json(w.excess) << ",\"tuple\":";
        if (w.tuple.empty()) {
            os << "null";
        } else {
            os << "[";
            for (std::size_t i = 0; i < w.tuple.size(); ++i) {
                if (i) os << ",";
                os << "[" << iodetail::fmt_json(w.tuple[i].real()) << ","
                   << iodetail::fmt_json(w.tuple[i].imag()) << "]";
            }
            os << "]";
        }
        os << "}";
    } else {
        os << "null";
    }
    os << ",\"probes\":[";
    for (std::size_t i = 0; i < rep.probes.trials.size(); ++i) {
        const auto& t = rep.probes.trials[i];
        if (i) os << ",";
        os << "{\"trial\":" << t.index << ",\"residual\":" << iodetail::fmt_json(t.residual)
           << ",\"excess\":" << iodetail::fmt_json(t.excess) << "}";
    }
    os << "]";
    os << ",\"sup_norm\":{\"grid_max\":" << iodetail::fmt_json(rep.probes.supnorm_grid)
       << ",\"coeff_tail\":" << iodetail::opt(rep.probes.supnorm_tail) << "}";
    os << ",\"flags\":[";
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (i) os << ",";
        os << "\"" << flags[i] << "\"";
    }
    os << "]";
    if (oracle) {
        os << ",\"oracle\":{\"boundary_norm\":" << iodetail::fmt_json(oracle->boundary_norm)
           << ",\"modulus_defect\":" << iodetail::fmt_json(oracle->modulus_defect_value)
           << ",\"modulus_radius\":" << iodetail::fmt_json(oracle->modulus_radius)
           << ",\"parseval_discrepancy\":" << iodetail::fmt_json(oracle->parseval_discrepancy)
           << ",\"parseval_tail\":" << iodetail::opt(oracle->parseval_tail)
           << ",\"grid\":" << oracle->grid << ",\"radial_ladder\":";
        if (oracle->ladder) {
            os << "{\"radii\":[";
            for (std::size_t i = 0; i < 3; ++i) {
                if (i) os << ",";
                os << iodetail::fmt_json(oracle->ladder->radii[i]);
            }
            os << "],\"bad_fraction\":[";
            for (std::size_t i = 0; i < 3; ++i) {
                if (i) os << ",";
                os << iodetail::fmt_json(oracle->ladder->bad_fraction[i]);
            }
            os << "],\"threshold\":" << iodetail::fmt_json(oracle->ladder->threshold)
               << ",\"pass\":" << (oracle->ladder->pass ? "true" : "false") << "}";
        } else {
            os << "null";
        }
        os << "}";
    }
    os << ",\"config\":";
    iodetail::emit_config(os, rep.config);
    os << "}";
    return os.str();
}

inline const char* membership_verdict_name(MembershipVerdict v) {
    switch (v) {
        case MembershipVerdict::Member: return "member";
        case MembershipVerdict::NonMember: return "nonmember";
        case MembershipVerdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

inline std::string membership_report_json(const MembershipReport& rep) {
    std::ostringstream os;
    os << "{\"verdict\":\"" << membership_verdict_name(rep.verdict) << "\"";
    os << ",\"residual\":" << iodetail::fmt_json(rep.residual);
    os << ",\"growth_rate\":" << iodetail::opt(rep.growth_rate);
    os << ",\"window\":" << rep.window;
    os << ",\"leading_zeros\":" << rep.leading_zeros;
    os << ",\"mismatch_index\":";
    if (rep.mismatch_index) {
        os << *rep.mismatch_index;
    } else {
        os << "null";
    }
    os << ",\"stabilization_ratio\":" << iodetail::fmt_json(rep.stabilization_ratio);
    os << ",\"preimage_norm_sq\":"
       << iodetail::fmt_json(rep.partial_norms.empty() ? 0.0 : rep.partial_norms.back());
    os << ",\"ill_conditioned\":" << (rep.ill_conditioned ? "true" : "false");
    os << ",\"config\":";
    iodetail::emit_config(os, rep.config);
    os << "}";
    return os.str();
}

} // namespace innerspace
