// Command-line front end: reads system/triple JSON files, runs evaluations,
// optimizations, measures, and Monte Carlo checks, and emits machine-readable
// results on stdout (diagnostics go to stderr).
//
// Exit codes: 0 success, 2 validation/configuration/parse error, 3 numerical
// failure (NaN or infinity where a finite value is required).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssc/io.hpp"
#include "ssc/ssc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

ssc::AccuracyKind parse_acc(const std::string& s) {
    if (s == "expected") return ssc::AccuracyKind::expected;
    if (s == "expected-worst") return ssc::AccuracyKind::expected_worst_case;
    if (s == "avg-mi") return ssc::AccuracyKind::avg_mi;
    if (s == "mi-of-avg") return ssc::AccuracyKind::mi_of_avg;
    if (s == "cond-ent") return ssc::AccuracyKind::cond_entropy;
    if (s == "kl") return ssc::AccuracyKind::kl;
    throw ssc::ConfigError("unknown accuracy cost '" + s +
                           "'; expected one of expected, expected-worst, avg-mi, mi-of-avg, "
                           "cond-ent, kl");
}

ssc::CompCostKind parse_comp(const std::string& s) {
    if (s == "cardinality") return ssc::CompCostKind::cardinality;
    if (s == "sparsity") return ssc::CompCostKind::sparsity;
    if (s == "init-entropy") return ssc::CompCostKind::init_entropy_plus_sparsity;
    throw ssc::ConfigError("unknown computation cost '" + s +
                           "'; expected cardinality, sparsity, or init-entropy");
}

ssc::RefDist parse_ref_dist(const std::string& s) {
    if (s == "w_averaged_occupancy") return ssc::RefDist::w_averaged_occupancy;
    if (s == "stationary") return ssc::RefDist::stationary;
    if (s == "uniform") return ssc::RefDist::uniform;
    throw ssc::ConfigError("unknown ref_dist '" + s + "'");
}

void print_stdout(const std::string& s) {
    std::fwrite(s.data(), 1, s.size(), stdout);
}

struct CommonCostFlags {
    std::string acc = "cond-ent";
    std::string comp = "cardinality";
    double kappa = 1.0;
    double alpha = 1.0;
    double smoothing = 0.0;
    double nnz_threshold = 1e-12;

    ssc::ObjectiveConfig objective() const {
        ssc::ObjectiveConfig cfg;
        cfg.accuracy_kind = parse_acc(acc);
        cfg.comp_model = ssc::CompCostModel{parse_comp(comp), nnz_threshold};
        cfg.kappa = kappa;
        cfg.alpha = alpha;
        cfg.kl_smoothing = smoothing;
        return cfg;
    }
};

struct OptimizerFlags {
    std::string method = "exhaustive";
    int k_max = 0;
    std::uint64_t seed = 0;
    long anneal_iters = 20000;
    double t0 = 1.0;
    double cooling = 0.995;
    std::string ref_dist = "w_averaged_occupancy";
    bool rho_argmin = false;
    bool trace = false;

    ssc::OptimizerConfig config() const {
        ssc::OptimizerConfig opt;
        if (method == "exhaustive") opt.method = ssc::OptimizeMethod::exhaustive;
        else if (method == "anneal") opt.method = ssc::OptimizeMethod::anneal;
        else throw ssc::ConfigError("unknown method '" + method + "'");
        opt.k_max = k_max;
        opt.seed = seed;
        opt.anneal_iters = static_cast<int>(anneal_iters);
        opt.t0 = t0;
        opt.cooling = cooling;
        opt.ref_dist = parse_ref_dist(ref_dist);
        opt.rho_mode = rho_argmin ? ssc::RhoMode::argmin_cost : ssc::RhoMode::bayes;
        opt.collect_trace = trace;
        return opt;
    }
};

void require_finite(double v, const std::string& what) {
    if (!std::isfinite(v)) {
        throw ssc::NumericError(what + " is not finite (" + ssc::format_double(v) +
                                "); for KL costs consider --smoothing");
    }
}

void emit_partition(ssc::JsonOut& out, const ssc::Partition& p) {
    out.arr();
    for (int b : p.assignment) out.num(b);
    out.end_arr();
}

void emit_optimization_result(ssc::JsonOut& out, const ssc::OptimizationResult& res,
                              bool with_trace) {
    out.key("K").num(res.k_value);
    out.key("accuracy").num(res.accuracy_component);
    out.key("computation").num(res.computation_component);
    out.key("k").num(res.best_partition.block_count());
    out.key("partition");
    emit_partition(out, res.best_partition);
    out.key("evaluations").num(res.evaluations);
    out.key("pi").matrix(res.best_triple.pi);
    out.key("phi").matrix(res.best_triple.phi);
    out.key("rho").matrix(res.best_triple.rho);
    if (with_trace) {
        out.key("trace").arr();
        for (const auto& [it, k] : res.trace) {
            out.arr().num(it).num(k).end_arr();
        }
        out.end_arr();
    }
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& system_path) {
    const auto doc = ssc::load_json_file(system_path);
    const ssc::SystemBundle b = ssc::parse_system_json(doc);
    const ssc::ValidationReport report = ssc::validate_system(b.sys, b.obs);

    ssc::JsonOut out;
    out.obj();
    out.key("valid").boolean(report.valid());
    out.key("errors").arr();
    for (const auto& e : report.errors) out.str(e);
    out.end_arr();
    out.key("warnings").arr();
    for (const auto& w : report.warnings) out.str(w);
    out.end_arr();
    if (b.weight.kind == ssc::WeightKind::geometric) {
        out.key("geometric_tail_mass")
            .num(std::pow(1.0 - b.weight.gamma, b.weight.horizon + 1));
    }
    out.end_obj();
    print_stdout(out.text() + "\n");
    return report.valid() ? kExitOk : kExitConfig;
}

int cmd_eval(const std::string& system_path, const std::string& triple_path,
             const CommonCostFlags& cost, const std::string& format) {
    const ssc::SystemBundle b = ssc::parse_system_json(ssc::load_json_file(system_path));
    const ssc::CompressionTriple triple =
        ssc::parse_triple_json(ssc::load_json_file(triple_path), b);
    const auto vr = ssc::validate_triple(triple, b.sys, b.obs);
    if (!vr.valid()) {
        throw ssc::ConfigError("triple fails validation: " + vr.errors.front());
    }
    const ssc::ObjectiveConfig cfg = cost.objective();
    const ssc::ObjectiveBreakdown k = ssc::objective_K(b.sys, b.obs, triple, b.weight, cfg);
    require_finite(k.accuracy, "accuracy cost");
    require_finite(k.computation, "computation cost");
    const auto per_time = ssc::per_time_accuracy(cfg.accuracy_kind, b.sys, b.obs, triple,
                                                 b.weight, cfg.kl_smoothing);
    const auto weights = ssc::weight_vector(b.weight);

    if (format == "csv") {
        std::string s = "metric,value\n";
        s += "K," + ssc::format_double(k.k_value) + "\n";
        s += "accuracy," + ssc::format_double(k.accuracy) + "\n";
        s += "computation," + ssc::format_double(k.computation) + "\n";
        for (std::size_t i = 0; i < per_time.size(); ++i) {
            s += "t" + std::to_string(per_time[i].first) + "," +
                 ssc::format_double(per_time[i].second) + "\n";
        }
        print_stdout(s);
        return kExitOk;
    }
    ssc::JsonOut out;
    out.obj();
    out.key("K").num(k.k_value);
    out.key("accuracy").num(k.accuracy);
    out.key("computation").num(k.computation);
    out.key("acc_kind").str(cost.acc);
    out.key("comp_kind").str(cost.comp);
    out.key("kappa").num(cost.kappa);
    out.key("alpha").num(cost.alpha);
    out.key("per_time").arr();
    for (std::size_t i = 0; i < per_time.size(); ++i) {
        out.obj();
        out.key("t").num(per_time[i].first);
        out.key("weight").num(weights[i].second);
        out.key("value").num(per_time[i].second);
        out.end_obj();
    }
    out.end_arr();
    if (b.weight.kind == ssc::WeightKind::geometric) {
        out.key("geometric_tail_mass")
            .num(std::pow(1.0 - b.weight.gamma, b.weight.horizon + 1));
    }
    out.end_obj();
    print_stdout(out.text() + "\n");
    return kExitOk;
}

int cmd_optimize(const std::string& system_path, const CommonCostFlags& cost,
                 const OptimizerFlags& opt_flags) {
    const ssc::SystemBundle b = ssc::parse_system_json(ssc::load_json_file(system_path));
    const ssc::ObjectiveConfig cfg = cost.objective();
    const ssc::OptimizerConfig opt = opt_flags.config();
    const ssc::OptimizationResult res = ssc::optimize(b.sys, b.obs, b.weight, cfg, opt);
    require_finite(res.k_value, "optimal K");

    ssc::JsonOut out;
    out.obj();
    out.key("method").str(opt_flags.method);
    emit_optimization_result(out, res, opt.collect_trace);
    out.end_obj();
    print_stdout(out.text() + "\n");
    return kExitOk;
}

int cmd_complexity(const std::string& system_path, const CommonCostFlags& cost,
                   const OptimizerFlags& opt_flags, bool unnormalized) {
    const ssc::SystemBundle b = ssc::parse_system_json(ssc::load_json_file(system_path));
    const ssc::ComplexityResult res = ssc::compression_complexity(
        b.sys, b.obs, b.weight, cost.objective(), opt_flags.config(), !unnormalized);
    require_finite(res.value, "compression complexity");

    ssc::JsonOut out;
    out.obj();
    out.key("compression_complexity").num(res.value);
    out.key("normalized").boolean(res.normalized);
    out.key("identity_K").num(res.identity_k);
    out.key("min_K").num(res.minimizer.k_value);
    out.key("accuracy").num(res.minimizer.accuracy_component);
    out.key("computation").num(res.minimizer.computation_component);
    out.key("partition");
    emit_partition(out, res.minimizer.best_partition);
    out.key("note").str("class-restricted minimum over induced hard partitions");
    out.end_obj();
    print_stdout(out.text() + "\n");
    return kExitOk;
}

int cmd_infoflow(const std::string& system_path, const std::string& triple_path,
                 const std::string& measure, int lag) {
    const ssc::SystemBundle b = ssc::parse_system_json(ssc::load_json_file(system_path));
    const ssc::CompressionTriple triple =
        ssc::parse_triple_json(ssc::load_json_file(triple_path), b);
    double value = 0.0;
    if (measure == "cond-ent") {
        value = ssc::info_flow_cond_ent(b.sys, b.obs, triple, b.weight, lag);
    } else if (measure == "mi") {
        value = ssc::info_flow_mi(b.sys, b.obs, triple, b.weight);
    } else {
        throw ssc::ConfigError("unknown measure '" + measure + "'; expected cond-ent or mi");
    }
    require_finite(value, "information flow");

    ssc::JsonOut out;
    out.obj();
    out.key("measure").str(measure);
    if (measure == "cond-ent") out.key("lag").num(lag);
    out.key("value").num(value);
    out.end_obj();
    print_stdout(out.text() + "\n");
    return kExitOk;
}

int cmd_pareto(const std::string& system_path, const std::string& alphas_arg,
               const CommonCostFlags& cost, const OptimizerFlags& opt_flags,
               const std::string& format, const std::string& front_out) {
    std::vector<double> alphas;
    std::stringstream ss(alphas_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) alphas.push_back(std::stod(item));
    }
    const ssc::SystemBundle b = ssc::parse_system_json(ssc::load_json_file(system_path));
    const auto entries = ssc::pareto_sweep(b.sys, b.obs, b.weight, cost.objective(), alphas,
                                           opt_flags.config());

    std::string front_csv = "computation,accuracy\n";
    for (const auto& e : entries) {
        if (!e.on_front) continue;
        front_csv += ssc::format_double(e.result.computation_component) + "," +
                     ssc::format_double(e.result.accuracy_component) + "\n";
    }
    if (!front_out.empty()) {
        std::ofstream f(front_out, std::ios::binary);
        if (!f) throw ssc::ConfigError("cannot write '" + front_out + "'");
        f << front_csv;
    }
    if (format == "csv") {
        print_stdout(front_csv);
        return kExitOk;
    }
    ssc::JsonOut out;
    out.obj();
    out.key("kappa").num(1.0);
    out.key("entries").arr();
    for (const auto& e : entries) {
        out.obj();
        out.key("alpha").num(e.alpha);
        out.key("K").num(e.result.k_value);
        out.key("accuracy").num(e.result.accuracy_component);
        out.key("computation").num(e.result.computation_component);
        out.key("k").num(e.result.best_partition.block_count());
        out.key("partition");
        emit_partition(out, e.result.best_partition);
        out.key("on_front").boolean(e.on_front);
        out.end_obj();
    }
    out.end_arr();
    out.end_obj();
    print_stdout(out.text() + "\n");
    return kExitOk;
}

int cmd_example(const std::string& name, const std::string& out_dir) {
    const ssc::ExampleSystem e = ssc::build_example(name);
    std::filesystem::create_directories(out_dir);
    std::string lower = name;
    for (char& c : lower) c = static_cast<char>(std::tolower(c));

    const std::string system_path = out_dir + "/" + lower + "_system.json";
    {
        std::ofstream f(system_path, std::ios::binary);
        if (!f) throw ssc::ConfigError("cannot write '" + system_path + "'");
        f << ssc::write_system_json(e);
    }
    std::string triple_path;
    if (e.reference) {
        triple_path = out_dir + "/" + lower + "_triple.json";
        std::ofstream f(triple_path, std::ios::binary);
        if (!f) throw ssc::ConfigError("cannot write '" + triple_path + "'");
        f << ssc::write_triple_json(*e.reference);
    }

    ssc::JsonOut out;
    out.obj();
    out.key("name").str(name);
    out.key("system").str(system_path);
    if (!triple_path.empty()) out.key("triple").str(triple_path);
    out.end_obj();
    print_stdout(out.text() + "\n");
    return kExitOk;
}

int cmd_mc_check(const std::string& system_path, const std::string& triple_path, long n_paths,
                 std::uint64_t seed, const std::string& acc, const std::string& estimator,
                 double smoothing) {
    const ssc::SystemBundle b = ssc::parse_system_json(ssc::load_json_file(system_path));
    const ssc::CompressionTriple triple =
        ssc::parse_triple_json(ssc::load_json_file(triple_path), b);

    std::vector<ssc::AccuracyKind> kinds;
    if (!acc.empty()) {
        kinds.push_back(parse_acc(acc));
    } else {
        kinds = {ssc::AccuracyKind::avg_mi, ssc::AccuracyKind::mi_of_avg,
                 ssc::AccuracyKind::cond_entropy, ssc::AccuracyKind::kl};
        if (b.obs.cost_matrix) {
            kinds.insert(kinds.begin(),
                         {ssc::AccuracyKind::expected, ssc::AccuracyKind::expected_worst_case});
        }
    }

    ssc::SampleConfig cfg;
    cfg.n_paths = n_paths;
    cfg.horizon = b.weight.horizon;
    cfg.seed = seed;
    cfg.estimator = estimator == "miller-madow" ? ssc::EstimatorKind::plugin_miller_madow
                                                : ssc::EstimatorKind::plugin;
    const ssc::PathSet paths = ssc::sample_paths(b.sys, b.obs, triple, cfg);

    bool all_pass = true;
    ssc::JsonOut out;
    out.obj();
    out.key("paths").num(n_paths);
    out.key("seed").num(static_cast<long>(seed));
    out.key("checks").arr();
    for (const auto kind : kinds) {
        const double exact =
            ssc::accuracy_cost(kind, b.sys, b.obs, triple, b.weight, smoothing);
        const ssc::Estimate est = ssc::estimate_cost(paths, kind, b.weight, b.obs.cost_matrix);
        const bool pass = ssc::mc_consistent(exact, est);
        all_pass = all_pass && pass;
        out.obj();
        out.key("acc").str(ssc::accuracy_kind_name(kind));
        out.key("exact").num(exact);
        out.key("estimate").num(est.value);
        out.key("stderr").num(est.std_error);
        out.key("pass").boolean(pass);
        out.end_obj();
    }
    out.end_arr();
    out.key("all_pass").boolean(all_pass);
    out.end_obj();
    print_stdout(out.text() + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"State-space compression toolkit"};
    app.require_subcommand(1);

    std::string system_path, triple_path, format = "json", out_dir = ".", name;
    std::string measure = "cond-ent", alphas, front_out, mc_acc, estimator = "plugin";
    int lag = 1;
    long n_paths = 100000;
    std::uint64_t mc_seed = 0;
    bool unnormalized = false;
    CommonCostFlags cost;
    OptimizerFlags opt;

    auto add_cost_flags = [&](CLI::App* cmd) {
        cmd->add_option("--acc", cost.acc,
                        "accuracy cost: expected|expected-worst|avg-mi|mi-of-avg|cond-ent|kl");
        cmd->add_option("--comp", cost.comp,
                        "computation cost: cardinality|sparsity|init-entropy");
        cmd->add_option("--kappa", cost.kappa, "computation cost weight");
        cmd->add_option("--alpha", cost.alpha, "accuracy cost weight");
        cmd->add_option("--smoothing", cost.smoothing, "epsilon smoothing for the KL cost");
        cmd->add_option("--nnz-threshold", cost.nnz_threshold,
                        "entries at or below this magnitude count as zero");
    };
    auto add_opt_flags = [&](CLI::App* cmd) {
        cmd->add_option("--method", opt.method, "exhaustive|anneal");
        cmd->add_option("--k-max", opt.k_max, "largest allowed block count (default n)");
        cmd->add_option("--seed", opt.seed, "annealing seed");
        cmd->add_option("--anneal-iters", opt.anneal_iters, "annealing evaluations");
        cmd->add_option("--t0", opt.t0, "initial temperature");
        cmd->add_option("--cooling", opt.cooling, "geometric cooling factor");
        cmd->add_option("--ref-dist", opt.ref_dist,
                        "w_averaged_occupancy|stationary|uniform");
        cmd->add_flag("--rho-argmin", opt.rho_argmin,
                      "use the deterministic argmin-cost predictor for induced rho");
    };

    auto* validate = app.add_subcommand("validate", "check a system file against all invariants");
    validate->add_option("system", system_path)->required();

    auto* eval = app.add_subcommand("eval", "evaluate K for a system and triple");
    eval->add_option("system", system_path)->required();
    eval->add_option("triple", triple_path)->required();
    add_cost_flags(eval);
    eval->add_option("--format", format, "json|csv");

    auto* optimize = app.add_subcommand("optimize", "search induced partitions for the best K");
    optimize->add_option("system", system_path)->required();
    add_cost_flags(optimize);
    add_opt_flags(optimize);
    optimize->add_flag("--trace", opt.trace, "record (iteration, K) pairs");

    auto* complexity = app.add_subcommand("complexity", "compression complexity of a system");
    complexity->add_option("system", system_path)->required();
    add_cost_flags(complexity);
    add_opt_flags(complexity);
    complexity->add_flag("--unnormalized", unnormalized, "report min K instead of the ratio");

    auto* infoflow = app.add_subcommand("infoflow", "inter-scale information flow measures");
    infoflow->add_option("system", system_path)->required();
    infoflow->add_option("triple", triple_path)->required();
    infoflow->add_option("--measure", measure, "cond-ent|mi");
    infoflow->add_option("--lag", lag, "prediction lag for cond-ent");

    auto* pareto = app.add_subcommand("pareto", "sweep alpha with kappa = 1");
    pareto->add_option("system", system_path)->required();
    pareto->add_option("--alphas", alphas, "comma-separated alpha values")->required();
    add_cost_flags(pareto);
    add_opt_flags(pareto);
    pareto->add_option("--format", format, "json|csv (csv prints the front)");
    pareto->add_option("--front-out", front_out, "also write the front CSV to this path");

    auto* example = app.add_subcommand("example", "write a named corpus system to disk");
    example->add_option("name", name, "SWAP2|IID4|LUMP4|CYL|RING8")->required();
    example->add_option("--out", out_dir, "output directory");

    auto* mc = app.add_subcommand("mc-check", "Monte Carlo cross-check of exact costs");
    mc->add_option("system", system_path)->required();
    mc->add_option("triple", triple_path)->required();
    mc->add_option("--paths", n_paths, "number of sampled paths");
    mc->add_option("--seed", mc_seed, "sampling seed");
    mc->add_option("--acc", mc_acc, "single accuracy cost to check (default: all applicable)");
    mc->add_option("--estimator", estimator, "plugin|miller-madow");
    mc->add_option("--smoothing", cost.smoothing, "epsilon smoothing for the KL cost");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (validate->parsed()) return cmd_validate(system_path);
        if (eval->parsed()) return cmd_eval(system_path, triple_path, cost, format);
        if (optimize->parsed()) return cmd_optimize(system_path, cost, opt);
        if (complexity->parsed()) return cmd_complexity(system_path, cost, opt, unnormalized);
        if (infoflow->parsed()) return cmd_infoflow(system_path, triple_path, measure, lag);
        if (pareto->parsed())
            return cmd_pareto(system_path, alphas, cost, opt, format, front_out);
        if (example->parsed()) return cmd_example(name, out_dir);
        if (mc->parsed())
            return cmd_mc_check(system_path, triple_path, n_paths, mc_seed, mc_acc, estimator,
                                cost.smoothing);
    } catch (const ssc::NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const ssc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
