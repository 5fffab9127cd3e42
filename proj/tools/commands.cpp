#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "bsa/boundary.hpp"
#include "bsa/core.hpp"
#include "bsa/error.hpp"
#include "bsa/kernels.hpp"
#include "bsa/partition.hpp"
#include "bsa/random.hpp"
#include "bsa/restriction.hpp"
#include "function_spec.hpp"
#include "report.hpp"
#include "verify.hpp"

namespace bsa::app {

namespace {

// Fourier-based quantities allocate several 2^n double vectors; beyond this they are skipped.
constexpr int kSpectralCap = 20;

struct RunConfig {
    std::uint64_t seed = 1;
    std::uint64_t trials = 10'000;
    bool exact = false;
    int precision = kCertifyPrecision;
    std::string format = "auto";
    std::string output;
    int workers = 0;
};

enum class Format { json, csv, text };

Format resolve_format(const RunConfig& cfg, Format fallback) {
    if (cfg.format == "json") return Format::json;
    if (cfg.format == "csv") return Format::csv;
    if (cfg.format == "text") return Format::text;
    return fallback;
}

void add_run_config(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--seed", cfg.seed, "Master seed for all sampling")->capture_default_str();
    sub->add_option("--trials", cfg.trials, "Monte Carlo trials per estimate")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40))
        ->capture_default_str();
    sub->add_flag("--exact", cfg.exact, "Prefer exact enumeration over sampling where available");
    sub->add_option("--precision", cfg.precision, "Decimal digits for certified arithmetic")
        ->check(CLI::Range(10, kMaxPrecision))
        ->capture_default_str();
    sub->add_option("--format", cfg.format, "json, csv, text or auto")
        ->check(CLI::IsMember({"auto", "json", "csv", "text"}))
        ->capture_default_str();
    sub->add_option("--output,-o", cfg.output, "Write the report to this file instead of stdout");
    sub->add_option("--workers", cfg.workers, std::string("Worker threads (default: $") + kWorkersEnv + " or all cores)")
        ->check(CLI::PositiveNumber);
}

// Flattens nested JSON into dotted key paths for two-column CSV output.
void flatten(const Json& node, const std::string& prefix, Table& table) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, table);
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) flatten(node[i], prefix + "[" + std::to_string(i) + "]", table);
    } else {
        table.add_row({prefix, node});
    }
}

void emit(std::ostream& out, const Json& doc, Format format) {
    if (format == Format::json) {
        write_json(out, doc);
        return;
    }
    Table table({"quantity", "value"});
    flatten(doc, "", table);
    table.write_csv(out);
}

void emit_table(std::ostream& out, const Table& table, Json meta, Format format) {
    if (format == Format::json) {
        meta["rows"] = table.to_json();
        write_json(out, meta);
        return;
    }
    table.write_csv(out);
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_bool(const std::optional<bool>& v) { return v ? Json(*v) : Json(nullptr); }

std::vector<int> int_list_or(const std::string& text, int lo, int hi) {
    if (text.empty()) {
        std::vector<int> all;
        for (int v = lo; v <= hi; ++v) all.push_back(v);
        return all;
    }
    return parse_int_list(text);
}

// ---------------------------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string spec;
    std::string deltas = "0.05,0.1,0.25";
    int k_constant = 1;
};

Json analyze_doc(const FunctionSpec& spec, const AnalyzeArgs& args, const RunConfig& cfg) {
    const TruthTable f = spec.table();
    const auto prof = sensitivity_profile(f);
    const auto inf = total_influence(prof);

    Json doc;
    doc["spec"] = spec.text;
    doc["n"] = f.n();
    doc["influence"] = inf.total;
    doc["bsa"] = surface_area(prof);
    doc["bsa_via_tails"] = bsa_via_tails(prof);
    doc["sqrt_influence"] = std::sqrt(inf.total);
    doc["total_sensitivity"] = prof.total_sensitivity();
    doc["influences"] = inf.per_coordinate;
    doc["profile"] = prof.counts;
    if (f.n() >= 1) doc["ceiling"] = Json{{"k", args.k_constant}, {"value", bsa_ceiling(f.n(), args.k_constant)}};

    if (f.n() <= kSpectralCap) {
        const auto spectrum = fourier_transform(f);
        auto list = Json::array();
        for (double delta : parse_real_list(args.deltas)) {
            const auto ns = noise_sensitivity(spectrum, delta);
            list.push_back({{"delta", ns.delta},
                            {"rho", ns.rho},
                            {"t", ns.t},
                            {"spectral", ns.spectral},
                            {"pointwise", ns.pointwise},
                            {"over_sqrt_t", ns.spectral / std::sqrt(ns.t)}});
        }
        doc["noise_sensitivity"] = list;
    } else {
        doc["noise_sensitivity"] = nullptr;
    }

    if (spec.has_polynomial()) {
        const auto p = spec.polynomial();
        const auto stats = poly_stats(p);
        Json poly;
        poly["degree"] = p.degree();
        poly["terms"] = p.terms().size();
        poly["variance"] = stats.variance;
        if (cfg.exact) {
            poly["alpha"] = {{"value", alpha_exact(p)}, {"std_error", 0.0}, {"exact", true}};
        } else {
            const auto est = alpha_estimate(p, cfg.trials, cfg.seed);
            poly["alpha"] = {{"value", est.value}, {"std_error", est.std_error}, {"exact", false}};
        }
        doc["polynomial"] = poly;
    }
    return doc;
}

// ---------------------------------------------------------------------------------------------

Table tail_table(const FunctionSpec& spec, const std::string& m_text) {
    const auto prof = sensitivity_profile(spec.table());
    Table table({"m", "p_E", "coupling_lb", "bound_ratio", "floor_factor", "floor_certified", "e_bound_certified"});
    for (int m : int_list_or(m_text, 1, prof.n)) {
        const auto rep = tail_coupling_check(prof, m);
        table.add_row({m, rep.p_E, rep.coupling_lb, rep.bound_ratio, rep.floor_factor, rep.floor_certified,
                       rep.e_bound_certified});
    }
    return table;
}

// ---------------------------------------------------------------------------------------------

struct PartitionArgs {
    std::string n = "1..12";
    std::string k;
    std::string b;
    std::string sizes;
};

Json to_cell(const HighFloat& v) { return static_cast<double>(v); }

void add_sandwich_row(Table& table, const SandwichReport& rep) {
    table.add_row({rep.spec.n, rep.spec.k, rep.spec.blocks(), rep.spec.sizes_label(), to_cell(rep.A), to_cell(rep.B),
                   to_cell(rep.gap), rep.gap_bound ? to_cell(*rep.gap_bound) : Json(nullptr), rep.pass_lower,
                   optional_bool(rep.pass_upper), optional_bool(rep.pass_gap_bound), rep.tight});
}

Table partition_table(const PartitionArgs& args, const RunConfig& cfg) {
    Table table({"n", "k", "b", "sizes", "A", "B", "gap", "gap_bound", "pass_lower", "pass_upper", "pass_gap_bound",
                 "tight"});
    if (!args.sizes.empty()) {
        const auto sizes = parse_int_list(args.sizes);
        int n = 0;
        for (int m : sizes) n += m;
        if (args.n != "1..12" && parse_int_list(args.n) != std::vector<int>{n}) {
            throw InputError("--n must equal the sum of --sizes");
        }
        for (int k : int_list_or(args.k, 0, n)) add_sandwich_row(table, sandwich_check({n, sizes, k}, cfg.precision));
        return table;
    }
    const auto ns = parse_int_list(args.n);
    for (int n : ns) {
        if (n < 1) throw InputError("n must be at least 1");
        const auto ks = int_list_or(args.k, 0, n);
        const auto bs = int_list_or(args.b, 1, n);
        const std::set<int> k_set(ks.begin(), ks.end());
        const std::set<int> b_set(bs.begin(), bs.end());
        for (const auto& rep : sandwich_sweep(n, n, cfg.precision)) {
            if (k_set.count(rep.spec.k) && b_set.count(rep.spec.blocks())) add_sandwich_row(table, rep);
        }
    }
    return table;
}

// ---------------------------------------------------------------------------------------------

struct RestrictArgs {
    std::string spec;
    std::string r = "1/64,1/32,1/16";
    std::string delta = "1/16";
};

Table restrict_table_report(const FunctionSpec& spec, const RestrictArgs& args, const RunConfig& cfg, std::ostream& err) {
    const auto p = spec.polynomial();
    Table table({"r", "delta", "estimate", "std_error", "accepted", "rejected", "rejection_rate", "outside_regime"});
    std::uint64_t cell = 0;
    bool warned = false;
    for (double r : parse_real_list(args.r)) {
        for (double delta : parse_real_list(args.delta)) {
            const auto est = restriction_failure_prob(p, r, delta, cfg.trials, Stream(cfg.seed, cell++)());
            if (est.outside_regime && !warned) {
                err << "warning: some (r, delta) cells lie outside (0, 1/16], where the failure bound is claimed\n";
                warned = true;
            }
            table.add_row({r, delta, est.value, est.std_error, est.accepted, est.rejected, est.rejection_rate(),
                           est.outside_regime});
        }
    }
    return table;
}

// ---------------------------------------------------------------------------------------------

Json boundary_doc(const FunctionSpec& spec) {
    const auto prof = sensitivity_profile(spec.table());
    const auto rep = boundary_report(prof);
    Json doc;
    doc["spec"] = spec.text;
    doc["n"] = prof.n;
    doc["influence"] = rep.influence;
    doc["bsa"] = rep.bsa;
    doc["var_sqrt_sens"] = rep.var_sqrt_sens;
    doc["influence_minus_bsa_squared"] = rep.influence - rep.bsa * rep.bsa;
    doc["vertex_boundary_size"] = rep.vertex_boundary_size;
    doc["vertex_boundary_fraction"] = rep.vertex_boundary_fraction;
    doc["constant_input"] = rep.constant_input;
    doc["threshold"] = optional_number(rep.threshold);
    doc["edge_biased_prob"] = optional_number(rep.edge_biased_prob);
    if (rep.constant_input) {
        doc["vertex_boundary_check"] = nullptr;
    } else {
        const auto chk = vertex_boundary_check(prof);
        doc["vertex_boundary_check"] = {{"edge_biased_prob", chk.edge_biased_prob}, {"margin", chk.margin}, {"pass", chk.pass}};
    }
    return doc;
}

Table levels_table(const FunctionSpec& spec) {
    Table table({"level", "plus", "minus", "boundary"});
    for (const auto& l : level_counts(spec.table())) table.add_row({l.level, l.plus, l.minus, l.boundary});
    return table;
}

// ---------------------------------------------------------------------------------------------

struct SweepArgs {
    std::string family;
    std::string n = "1..12";
    std::string delta = "0.1";
    int k_constant = 1;
};

std::string spec_for(const std::string& family, int n) {
    const auto colon = family.find(':');
    if (colon == std::string::npos) return family + ":" + std::to_string(n);
    return family + ",n=" + std::to_string(n);
}

Table sweep_table(const SweepArgs& args) {
    Table table({"family", "n", "delta", "influence", "bsa", "sqrt_influence", "noise_sensitivity", "ns_over_sqrt_t",
                 "vertex_boundary_margin", "ceiling"});
    const auto deltas = parse_real_list(args.delta);
    for (int n : parse_int_list(args.n)) {
        const auto spec = parse_function_spec(spec_for(args.family, n));
        const auto f = spec.table();
        const auto prof = sensitivity_profile(f);
        const double inf = total_influence(prof).total;
        const double b = surface_area(prof);
        const Json margin = prof.total_sensitivity() == 0 ? Json(nullptr) : Json(vertex_boundary_check(prof).margin);
        std::optional<FourierSpectrum> spectrum;
        if (n <= kSpectralCap) spectrum = fourier_transform(f);
        for (double delta : deltas) {
            Json ns = nullptr;
            Json per = nullptr;
            if (spectrum) {
                const auto r = noise_sensitivity(*spectrum, delta);
                ns = r.spectral;
                per = r.spectral / std::sqrt(r.t);
            }
            table.add_row({args.family, n, delta, inf, b, std::sqrt(inf), ns, per, margin, bsa_ceiling(n, args.k_constant)});
        }
    }
    return table;
}

// ---------------------------------------------------------------------------------------------

struct VerifyArgs {
    std::string criteria = "1..14";
    VerifyOptions options;
};

int run_verify(const VerifyArgs& args, const RunConfig& cfg, std::ostream& out) {
    const Format format = resolve_format(cfg, Format::text);
    VerifyOptions options = args.options;
    Table table({"criterion", "title", "pass", "seconds", "limit_seconds", "detail"});
    bool all = true;
    for (int id : parse_int_list(args.criteria)) {
        const auto res = run_criterion(id, options);
        all = all && res.passed();
        if (format == Format::text) {
            out << "criterion " << std::setw(2) << res.id << "  " << (res.passed() ? "PASS" : "FAIL") << "  "
                << std::fixed << std::setprecision(3) << res.seconds << " s";
            if (res.limit_seconds > 0) out << " (limit " << std::setprecision(0) << res.limit_seconds << " s)";
            out << std::defaultfloat << "  " << res.title << ": " << res.detail << '\n';
            out.flush();
        }
        table.add_row({res.id, res.title, res.passed(), res.seconds,
                       res.limit_seconds > 0 ? Json(res.limit_seconds) : Json(nullptr), res.detail});
    }
    if (format != Format::text) emit_table(out, table, Json{{"seed", options.seed}}, format);
    return all ? kExitOk : kExitVerification;
}

int configure_workers(const RunConfig& cfg) {
    int workers = cfg.workers;
    if (workers == 0) {
        if (const char* env = std::getenv(kWorkersEnv); env && *env) {
            char* end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (*end != '\0' || v < 1 || v > 4096) throw InputError(std::string(kWorkersEnv) + " must be a positive integer");
            workers = static_cast<int>(v);
        }
    }
    if (workers > 0) kernels::set_worker_count(workers);
    return workers;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Boolean surface area toolkit: exact and Monte Carlo analysis of Boolean functions and PTFs", "bsa"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every command");

    RunConfig cfg;
    AnalyzeArgs analyze_args;
    std::string spec_text;
    std::string m_text;
    PartitionArgs partition_args;
    RestrictArgs restrict_args;
    bool levels = false;
    SweepArgs sweep_args;
    VerifyArgs verify_args;

    auto* analyze = app.add_subcommand("analyze", "BSA, influence, sensitivity profile, noise sensitivity");
    analyze->add_option("spec", spec_text, "Function spec")->required();
    analyze->add_option("--delta", analyze_args.deltas, "Noise rates, comma separated")->capture_default_str();
    analyze->add_option("--k-constant", analyze_args.k_constant, "Degree constant for the BSA ceiling")
        ->check(CLI::Range(0, 64))
        ->capture_default_str();
    add_run_config(analyze, cfg);

    auto* tail = app.add_subcommand("tail", "Coupling lower bounds for P[s_f >= m]");
    tail->add_option("spec", spec_text, "Function spec")->required();
    tail->add_option("--m", m_text, "Thresholds, e.g. 1..9 (default 1..n)");
    add_run_config(tail, cfg);

    auto* partition = app.add_subcommand("partition", "Certified block-partition sandwich B <= A <= B + b");
    partition->add_option("--n", partition_args.n, "Population sizes, e.g. 1..12")->capture_default_str();
    partition->add_option("--k", partition_args.k, "Zero counts (default 0..n)");
    partition->add_option("--b", partition_args.b, "Block counts with almost-equal sizes (default 1..n)");
    partition->add_option("--sizes", partition_args.sizes, "Explicit block sizes, e.g. 3,2,2");
    add_run_config(partition, cfg);

    auto* restrict_cmd = app.add_subcommand("restrict", "Random-restriction failure probability of a PTF");
    restrict_cmd->add_option("spec", spec_text, "Polynomial spec")->required();
    restrict_cmd->add_option("--r", restrict_args.r, "Survival rates")->capture_default_str();
    restrict_cmd->add_option("--delta", restrict_args.delta, "Closeness parameters")->capture_default_str();
    add_run_config(restrict_cmd, cfg);

    auto* boundary = app.add_subcommand("boundary", "Vertex-boundary report and edge-biased threshold check");
    boundary->add_option("spec", spec_text, "Function spec")->required();
    boundary->add_flag("--levels", levels, "Emit per-level sign and boundary counts as CSV");
    add_run_config(boundary, cfg);

    auto* verify = app.add_subcommand("verify", "Run the acceptance property suite");
    verify->add_option("--criterion", verify_args.criteria, "Criteria to run, e.g. 1..14 or 2,5")->capture_default_str();
    verify->add_option("--k-constant", verify_args.options.k_constant, "Degree constant for the ceiling check")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    verify->add_option("--suite-seed", verify_args.options.seed, "Master seed of the randomized corpora")->capture_default_str();
    add_run_config(verify, cfg);

    auto* sweep = app.add_subcommand("sweep", "One CSV row per (n, delta) cell for a generator family");
    sweep->add_option("family", sweep_args.family, "maj, harm, par, rand:d=2,seed=7 or sparse:d=2,terms=5,seed=1")->required();
    sweep->add_option("--n", sweep_args.n, "Sizes, e.g. 1..15")->capture_default_str();
    sweep->add_option("--delta", sweep_args.delta, "Noise rates")->capture_default_str();
    sweep->add_option("--k-constant", sweep_args.k_constant, "Degree constant for the ceiling column")
        ->check(CLI::Range(0, 64))
        ->capture_default_str();
    add_run_config(sweep, cfg);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }

    std::ostringstream report;
    report.imbue(std::locale::classic());
    int code = kExitOk;
    try {
        configure_workers(cfg);
        if (*analyze) {
            emit(report, analyze_doc(parse_function_spec(spec_text), analyze_args, cfg), resolve_format(cfg, Format::json));
        } else if (*tail) {
            const auto spec = parse_function_spec(spec_text);
            emit_table(report, tail_table(spec, m_text), Json{{"spec", spec.text}, {"n", spec.n()}},
                       resolve_format(cfg, Format::json));
        } else if (*partition) {
            emit_table(report, partition_table(partition_args, cfg), Json{{"precision", cfg.precision}},
                       resolve_format(cfg, Format::csv));
        } else if (*restrict_cmd) {
            const auto spec = parse_function_spec(spec_text);
            emit_table(report, restrict_table_report(spec, restrict_args, cfg, err),
                       Json{{"spec", spec.text}, {"trials", cfg.trials}, {"seed", cfg.seed}},
                       resolve_format(cfg, Format::csv));
        } else if (*boundary) {
            const auto spec = parse_function_spec(spec_text);
            if (levels) {
                emit_table(report, levels_table(spec), Json{{"spec", spec.text}}, resolve_format(cfg, Format::csv));
            } else {
                emit(report, boundary_doc(spec), resolve_format(cfg, Format::json));
            }
        } else if (*sweep) {
            emit_table(report, sweep_table(sweep_args), Json{{"family", sweep_args.family}}, resolve_format(cfg, Format::csv));
        } else if (*verify) {
            // Stream verification lines as they finish unless they are being collected into a file.
            if (cfg.output.empty()) return run_verify(verify_args, cfg, out);
            code = run_verify(verify_args, cfg, report);
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }

    if (cfg.output.empty()) {
        out << report.str();
    } else {
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file || !(file << report.str())) {
            err << "error: cannot write '" << cfg.output << "'\n";
            return kExitInput;
        }
    }
    return code;
}

} // namespace bsa::app
