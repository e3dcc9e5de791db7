// lpf-lab: workbench for largest-prime-factor statistics of consecutive
// integers and the explicit density bounds they satisfy.
//
// Subcommands: tables | bounds | curve | scan | verify.
// Every run prints a metadata header (version, config hash, wall time);
// data payloads are deterministic for a fixed command line and config.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "lpflab/acceptance.hpp"
#include "lpflab/bounds.hpp"
#include "lpflab/empirical.hpp"
#include "lpflab/sieve.hpp"
#include "lpflab/special.hpp"

using json = nlohmann::ordered_json;
using namespace lpflab;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kSchema = 1;

struct RunConfig {
    double quad_tol = 1e-11;
    u64 segment_length = 1u << 18;
    unsigned parallel = 2;
    unsigned u_max = 30;
    double special_tol = 1e-9;
    int precision = 12;
    std::string format = "json";
    std::string out_path;      // empty = stdout
    bool deterministic = true; // no randomness anywhere; recorded for provenance

    std::string canonical() const {
        std::ostringstream s;
        s << "quad_tol=" << quad_tol << ";segment_length=" << segment_length
          << ";parallel=" << parallel << ";u_max=" << u_max << ";special_tol=" << special_tol
          << ";precision=" << precision << ";format=" << format
          << ";deterministic=" << deterministic;
        return s.str();
    }

    std::string hash() const {
        // FNV-1a, enough to fingerprint a config in run metadata
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char ch : canonical()) {
            h ^= ch;
            h *= 1099511628211ull;
        }
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }
};

double round_sig(double v, int digits) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return std::strtod(buf, nullptr);
}

std::string fmt_sig(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

class Emitter {
public:
    Emitter(const RunConfig& cfg, std::chrono::steady_clock::time_point start)
        : cfg_(cfg), start_(start) {}

    // text payloads (tsv/csv) carry the metadata as comment lines
    void emit_text(const std::string& body) {
        double ms = wall_ms();
        std::ostringstream full;
        full << "# lpf-lab " << kVersion << " schema=" << kSchema << " config=" << cfg_.hash()
             << "\n";
        full << "# wall_ms=" << fmt_sig(ms, 6) << " (metadata; excluded from payload determinism)\n";
        full << body;
        write(full.str());
    }

    void emit_json(json data) {
        json root;
        root["meta"] = {{"tool", "lpf-lab"},
                        {"version", kVersion},
                        {"schema", kSchema},
                        {"config_hash", cfg_.hash()},
                        {"deterministic", cfg_.deterministic},
                        {"wall_ms", wall_ms()}};
        root["data"] = std::move(data);
        write(root.dump(2) + "\n");
    }

private:
    double wall_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

    void write(const std::string& s) {
        if (cfg_.out_path.empty()) {
            std::cout << s;
            return;
        }
        // write-then-rename so failures never leave partial files
        std::string tmp = cfg_.out_path + ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open output file " + tmp);
            f << s;
            if (!f) throw std::runtime_error("short write to " + tmp);
        }
        if (std::rename(tmp.c_str(), cfg_.out_path.c_str()) != 0)
            throw std::runtime_error("cannot rename " + tmp + " to " + cfg_.out_path);
    }

    const RunConfig& cfg_;
    std::chrono::steady_clock::time_point start_;
};

json bound_to_json(const BoundResult& r, const RunConfig& cfg) {
    json j;
    j["value"] = round_sig(r.value, cfg.precision);
    json am = json::object();
    for (auto& [k, v] : r.argmax) am[k] = round_sig(v, cfg.precision);
    j["argmax"] = am;
    j["region"] = r.region;
    j["trace"] = r.trace.summary();
    return j;
}

FactorTable build_scan_table(u64 n_max, const std::string& what, const RunConfig& cfg,
                             const std::string& load_path, const std::string& save_path) {
    u64 hi = n_max;
    if (what == "delta") hi = n_max + std::max<u64>(10000, n_max / 100);
    if (!load_path.empty()) {
        std::ifstream in(load_path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open table file " + load_path);
        auto t = load_factor_table(in);
        if (t.lo() != 1 || t.hi() < hi)
            throw std::invalid_argument("loaded table does not cover [1, " + std::to_string(hi) + "]");
        return t;
    }
    SieveConfig sc;
    sc.segment_length = cfg.segment_length;
    sc.parallel_segments = cfg.parallel;
    auto t = build_factor_table(1, hi, sc);
    if (!save_path.empty()) {
        std::string tmp = save_path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open table file " + tmp);
            dump_factor_table(t, out);
            if (!out) throw std::runtime_error("short write to " + tmp);
        }
        if (std::rename(tmp.c_str(), save_path.c_str()) != 0)
            throw std::runtime_error("cannot rename " + tmp + " to " + save_path);
    }
    return t;
}

std::string counts_csv(const PatternCounts& pc) {
    std::ostringstream s;
    s << "class,count\n";
    for (auto& [k, v] : pc.counts) s << k << "," << v << "\n";
    s << "ties," << pc.ties << "\n";
    s << "classified," << pc.classified << "\n";
    return s.str();
}

json counts_json(const PatternCounts& pc) {
    json j;
    json c = json::object();
    for (auto& [k, v] : pc.counts) c[k] = v;
    j["n_max"] = pc.n_max;
    j["counts"] = c;
    j["ties"] = pc.ties;
    j["classified"] = pc.classified;
    return j;
}

} // namespace

int main(int argc, char** argv) {
    auto start = std::chrono::steady_clock::now();
    RunConfig cfg;

    CLI::App app{"largest-prime-factor workbench: exact sieve counts and explicit density bounds"};
    app.set_config("--config", "", "read options from a key=value config file");
    app.add_option("--quad-tol", cfg.quad_tol, "absolute quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--segment-length", cfg.segment_length, "sieve segment length")->check(CLI::Range(u64(2), u64(1) << 28));
    app.add_option("--parallel", cfg.parallel, "worker threads for segment/modulus fan-out")->check(CLI::Range(1u, 256u));
    app.add_option("--umax", cfg.u_max, "extent of the special-function tables")->check(CLI::Range(3u, 200u));
    app.add_option("--special-tol", cfg.special_tol, "target accuracy of the tables")->check(CLI::PositiveNumber);
    app.add_option("--precision", cfg.precision, "significant digits for decimal output")->check(CLI::Range(3, 17));
    app.add_option("--out", cfg.out_path, "output file (default stdout); written atomically");
    app.add_flag("--deterministic,!--no-deterministic", cfg.deterministic,
                 "record the (always-on) seedless determinism contract in metadata");
    app.require_subcommand(1);

    // ---- tables ----
    auto* tables_cmd = app.add_subcommand("tables", "emit rho/omega samples as TSV (u, rho, omega)");
    double tab_step = 0.01;
    tables_cmd->add_option("--step", tab_step, "sample spacing")->check(CLI::PositiveNumber);
    double tab_umax = 0, tab_tol = 0; // aliases for the global options
    tables_cmd->add_option("--umax", tab_umax, "extent of the emitted table");
    tables_cmd->add_option("--tol", tab_tol, "target accuracy");

    // ---- bounds ----
    auto* bounds_cmd = app.add_subcommand("bounds", "evaluate/maximize an explicit bound, emit JSON");
    std::string which;
    double arg_alpha = 1.0;
    int arg_J = 3;
    bool refined = false;
    bounds_cmd->add_option("--which", which, "valley|peak|c3|c4|calpha|cor1|cor2|cor3")
        ->required()
        ->check(CLI::IsMember({"valley", "peak", "c3", "c4", "calpha", "cor1", "cor2", "cor3"}));
    double level_override = 0.0;
    bounds_cmd->add_option("--alpha", arg_alpha, "alpha for calpha");
    bounds_cmd->add_option("--J", arg_J, "tuple length for c3/c4, refinement depth for cor2");
    bounds_cmd->add_flag("--refined", refined, "apply the J-tuple refinement to cor2");
    bounds_cmd->add_option("--level-override", level_override,
                           "experimental: replace the distribution level nu(c) in g");
    bounds_cmd->add_flag("--json", "JSON output (the default; accepted for compatibility)");

    // ---- curve ----
    auto* curve_cmd = app.add_subcommand("curve", "emit a bound-component curve as TSV");
    std::string curve_f = "fdelta";
    double cv_from = 1.0 / 3.0, cv_to = 0.5, cv_step = 0.001;
    curve_cmd->add_option("--f", curve_f, "curve name (fdelta)")->check(CLI::IsMember({"fdelta"}));
    curve_cmd->add_option("--from", cv_from, "start of the parameter range");
    curve_cmd->add_option("--to", cv_to, "end of the parameter range");
    curve_cmd->add_option("--step", cv_step, "sample spacing")->check(CLI::PositiveNumber);

    // ---- scan ----
    auto* scan_cmd = app.add_subcommand("scan", "exact sieve-backed counts over [1, nmax]");
    u64 nmax = 0, scan_y = 0, scan_z = 1, scan_Q = 100;
    int scan_k = 3, scan_J = 3, scan_j0 = 0;
    std::string scan_what, scan_set = "interval", scan_mode = "min";
    bool scan_strict = true;
    scan_cmd->add_option("--nmax", nmax, "scan ceiling")->required()->check(CLI::PositiveNumber);
    scan_cmd->add_option("--what", scan_what, "triples|pairs|tuples|delta|perm|smooth|bv|rivat")
        ->required()
        ->check(CLI::IsMember({"triples", "pairs", "tuples", "delta", "perm", "smooth", "bv", "rivat"}));
    scan_cmd->add_option("--y", scan_y, "truncation / smoothness bound y (default: no truncation)");
    scan_cmd->add_option("--z", scan_z, "lower sifting bound z");
    scan_cmd->add_option("--Q", scan_Q, "modulus ceiling for bv");
    scan_cmd->add_option("--k", scan_k, "window length for perm")->check(CLI::Range(2, 6));
    scan_cmd->add_option("--J", scan_J, "tuple length for tuples")->check(CLI::Range(3, 64));
    scan_cmd->add_option("--j0", scan_j0, "distinguished position for tuples");
    scan_cmd->add_option("--set", scan_set, "bv set: smooth|interval|rough")
        ->check(CLI::IsMember({"smooth", "interval", "rough"}));
    scan_cmd->add_option("--mode", scan_mode, "tuples extreme: min|max")
        ->check(CLI::IsMember({"min", "max"}));
    scan_cmd->add_flag("--strict,!--non-strict", scan_strict, "require unique attainment for tuples");
    std::string scan_format = "json";
    scan_cmd->add_option("--format", scan_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    std::string table_in, table_out;
    scan_cmd->add_option("--load-table", table_in, "reuse a dumped factor table instead of sieving");
    scan_cmd->add_option("--save-table", table_out, "dump the sieved factor table for later runs");

    // ---- verify ----
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite; nonzero exit on failure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Emitter emit(cfg, start);

        if (*tables_cmd) {
            if (tab_umax > 0) cfg.u_max = static_cast<unsigned>(tab_umax);
            if (tab_tol > 0) cfg.special_tol = tab_tol;
            SpecialFnTables fns(cfg.u_max, 1e-4, cfg.special_tol);
            std::ostringstream body;
            body << "u\trho\tomega\n";
            for (double u = 0.0; u <= cfg.u_max + 1e-12; u += tab_step)
                body << fmt_sig(u, cfg.precision) << "\t" << fmt_sig(fns.rho(std::min(u, double(cfg.u_max))), cfg.precision)
                     << "\t" << fmt_sig(fns.omega(std::min(u, double(cfg.u_max))), cfg.precision) << "\n";
            emit.emit_text(body.str());
            return 0;
        }

        if (*bounds_cmd) {
            SpecialFnTables fns(cfg.u_max, 1e-4, cfg.special_tol);
            BoundsLab lab(fns, {cfg.quad_tol, 48}, level_override);
            json data;
            data["which"] = which;
            if (which == "valley") {
                data["result"] = bound_to_json(lab.maximize_valley(), cfg);
            } else if (which == "peak") {
                auto pt = lab.peak_total();
                data["windows"] = json::array();
                for (auto& w : pt.windows) data["windows"].push_back(bound_to_json(w, cfg));
                data["total"] = round_sig(pt.total, cfg.precision);
            } else if (which == "c3") {
                data["J"] = arg_J;
                data["result"] = bound_to_json(lab.c3(arg_J), cfg);
            } else if (which == "c4") {
                data["J"] = arg_J;
                data["result"] = bound_to_json(lab.c4(arg_J), cfg);
            } else if (which == "calpha") {
                data["alpha"] = arg_alpha;
                data["result"] = bound_to_json(
                    arg_alpha <= 0.5 ? lab.c_alpha_small(arg_alpha) : lab.c_alpha_large(arg_alpha), cfg);
            } else if (which == "cor1") {
                data["result"] = bound_to_json(lab.corollary1(), cfg);
            } else if (which == "cor2") {
                int J = refined ? arg_J : 2;
                data["J"] = J;
                data["refined"] = refined;
                data["value"] = round_sig(lab.delta_inverse_upper_bound(J), cfg.precision);
            } else { // cor3
                auto b = BoundsLab::corollary3_bounds();
                data["valley_upper"] = round_sig(b[0], cfg.precision);
                data["peak_upper"] = round_sig(b[1], cfg.precision);
                data["increasing_upper"] = round_sig(b[2], cfg.precision);
                data["decreasing_upper"] = round_sig(b[3], cfg.precision);
            }
            emit.emit_json(std::move(data));
            return 0;
        }

        if (*curve_cmd) {
            SpecialFnTables fns(cfg.u_max, 1e-4, cfg.special_tol);
            BoundsLab lab(fns, {cfg.quad_tol, 48});
            std::ostringstream body;
            body << "delta\tf\n";
            for (double d = cv_from; d <= cv_to + 1e-12; d += cv_step) {
                double x = std::min(d, 0.5);
                body << fmt_sig(x, cfg.precision) << "\t" << fmt_sig(lab.f_objective(x), cfg.precision)
                     << "\n";
            }
            emit.emit_text(body.str());
            return 0;
        }

        if (*scan_cmd) {
            auto table = build_scan_table(nmax, scan_what, cfg, table_in, table_out);
            const u64 y = scan_y == 0 ? nmax : scan_y;
            const bool csv = scan_format == "csv";
            json data;
            std::ostringstream body;
            if (scan_what == "triples") {
                auto pc = count_triple_patterns(nmax, table);
                if (csv) body << counts_csv(pc);
                else data = counts_json(pc);
            } else if (scan_what == "pairs") {
                auto pc = count_pairwise(nmax, y, table);
                if (csv) body << counts_csv(pc);
                else {
                    data = counts_json(pc);
                    data["calibration_band"] = "conjectural less-density 1/2 +- 0.02 at nmax=1e6";
                }
            } else if (scan_what == "tuples") {
                auto pc = count_tuple_extremes(nmax, scan_J, scan_j0,
                                               scan_mode == "min" ? ExtremeMode::min : ExtremeMode::max,
                                               scan_strict, table);
                if (csv) body << counts_csv(pc);
                else data = counts_json(pc);
            } else if (scan_what == "delta") {
                auto ds = delta_sums(nmax, table);
                if (csv) {
                    body << "key,value\n";
                    body << "sum_delta_inv," << fmt_sig(ds.sum_delta_inv, cfg.precision) << "\n";
                    body << "sum_delta_star_inv," << fmt_sig(ds.sum_delta_star_inv, cfg.precision) << "\n";
                    body << "excluded,1\n";
                } else {
                    data["n_max"] = ds.n_max;
                    data["sum_delta_inv"] = round_sig(ds.sum_delta_inv, cfg.precision);
                    data["sum_delta_star_inv"] = round_sig(ds.sum_delta_star_inv, cfg.precision);
                    data["excluded"] = ds.excluded;
                }
            } else if (scan_what == "perm") {
                auto pc = permutation_densities(nmax, scan_k, table);
                if (csv) body << counts_csv(pc);
                else {
                    data = counts_json(pc);
                    data["calibration_band"] = "conjectural frequency 1/k! +- 0.02 at nmax=1e6";
                }
            } else if (scan_what == "smooth") {
                SpecialFnTables fns(cfg.u_max, 1e-4, cfg.special_tol);
                auto sc = smooth_counts(nmax, y, scan_z, table, fns, {cfg.quad_tol, 48});
                json j{{"psi", sc.psi},
                       {"psi0", sc.psi0},
                       {"phi", sc.phi},
                       {"psi_pred", round_sig(sc.psi_pred, cfg.precision)},
                       {"psi0_pred", round_sig(sc.psi0_pred, cfg.precision)},
                       {"psi_rel_dev", round_sig(sc.psi_rel_dev, cfg.precision)},
                       {"psi0_rel_dev", round_sig(sc.psi0_rel_dev, cfg.precision)}};
                if (csv) {
                    body << "key,value\n";
                    for (auto& [k, v] : j.items()) body << k << "," << v.dump() << "\n";
                } else {
                    data = j;
                }
            } else if (scan_what == "bv") {
                BvSet set = scan_set == "smooth" ? BvSet::smooth
                            : scan_set == "rough" ? BvSet::rough
                                                  : BvSet::interval;
                auto rep = bv_discrepancy(nmax, y, scan_z, scan_Q, set, table, cfg.parallel);
                if (csv) {
                    body << "q,max_dev\n";
                    for (u64 q = 1; q <= rep.Q; ++q)
                        body << q << "," << fmt_sig(rep.per_q_max[q - 1], cfg.precision) << "\n";
                    body << "summary_max," << fmt_sig(rep.max_dev, cfg.precision) << "\n";
                    body << "summary_mean," << fmt_sig(rep.mean_dev, cfg.precision) << "\n";
                } else {
                    data["x"] = rep.x;
                    data["y"] = rep.y;
                    data["z"] = rep.z;
                    data["Q"] = rep.Q;
                    data["set"] = rep.set_name;
                    data["max_dev"] = round_sig(rep.max_dev, cfg.precision);
                    data["mean_dev"] = round_sig(rep.mean_dev, cfg.precision);
                    json pq = json::array();
                    for (double v : rep.per_q_max) pq.push_back(round_sig(v, cfg.precision));
                    data["per_q_max"] = pq;
                }
            } else { // rivat
                long long s = rivat_fy_sum(nmax, y, table);
                if (csv) body << "key,value\nsum_fy," << s << "\n";
                else data["sum_fy"] = s;
            }
            if (csv) emit.emit_text(body.str());
            else emit.emit_json(std::move(data));
            return 0;
        }

        if (*verify_cmd) {
            auto results = run_acceptance();
            bool all = true;
            for (auto& r : results) {
                std::cout << format_criterion(r) << "\n";
                all &= r.pass;
            }
            std::cout << (all ? "acceptance: ALL PASS" : "acceptance: FAILURES PRESENT") << "\n";
            return all ? 0 : 1;
        }
    } catch (const std::exception& e) {
        json err{{"error", {{"type", typeid(e).name()}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
