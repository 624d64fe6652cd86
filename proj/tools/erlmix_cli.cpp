// erlmix command line: build, truncate, and measure Erlang mixture
// approximations, run rate studies, and verify the library's invariants.
//
// Exit codes: 0 success, 1 check failure, 2 configuration error,
// 3 computation failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "erlmix/densities.hpp"
#include "erlmix/kernels.hpp"
#include "erlmix/metrics.hpp"
#include "erlmix/mixture.hpp"
#include "erlmix/operator.hpp"
#include "erlmix/parallel.hpp"
#include "erlmix/ratelab.hpp"
#include "erlmix/rng.hpp"
#include "erlmix/truncation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitComputation = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path out_dir() {
    if (const char* env = std::getenv("ERLMIX_OUT_DIR")) return fs::path(env);
    return fs::path(".");
}

// resolve relative output paths against the output directory
fs::path resolve_out(const std::string& name) {
    fs::path p(name);
    if (p.is_absolute()) return p;
    return out_dir() / p;
}

void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() +
                                     " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return j;
}

struct DensityOpts {
    std::string name = "product_exponential";
    int d = 1;
    double M = 1.0;
    double alpha = 0.5;
    double beta = 1.0;
    std::vector<double> rates;
    std::vector<std::int64_t> shapes;
    std::string mixture_file;  // erlang_mixture_reference
};

void add_density_opts(CLI::App* cmd, DensityOpts& opts) {
    cmd->add_option("--density", opts.name,
                    "target density: uniform_box, product_exponential, "
                    "product_gamma_integer, holder_bump, "
                    "erlang_mixture_reference");
    cmd->add_option("--d", opts.d, "dimension")->check(CLI::PositiveNumber);
    cmd->add_option("--M", opts.M, "uniform_box upper corner");
    cmd->add_option("--alpha", opts.alpha, "holder_bump exponent");
    cmd->add_option("--beta", opts.beta, "product_gamma_integer rate");
    cmd->add_option("--rates", opts.rates, "product_exponential rates");
    cmd->add_option("--shapes", opts.shapes, "product_gamma_integer shapes");
    cmd->add_option("--reference-mixture", opts.mixture_file,
                    "mixture file for erlang_mixture_reference");
}

erlmix::DensitySpec make_density(const DensityOpts& opts) {
    erlmix::ZooParams params;
    params.M = opts.M;
    params.alpha = opts.alpha;
    params.beta = opts.beta;
    params.rates = opts.rates;
    params.shapes = opts.shapes;
    if (!opts.mixture_file.empty())
        params.mixture = erlmix::mixture_from_json(load_json(opts.mixture_file));
    try {
        return erlmix::zoo_density(opts.name, opts.d, params);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

int cmd_approximate(const DensityOpts& dopts, int n, const std::string& policy,
                    double residual_tol, std::int64_t max_index,
                    std::int64_t box_N, const std::string& out) {
    const auto f = make_density(dopts);
    erlmix::IndexPolicy ip;
    if (policy == "support")
        ip.mode = erlmix::IndexPolicy::Mode::support_box;
    else if (policy == "threshold")
        ip.mode = erlmix::IndexPolicy::Mode::mass_threshold;
    else if (policy == "box")
        ip.mode = erlmix::IndexPolicy::Mode::fixed_box;
    else
        throw ConfigError("unknown policy '" + policy +
                          "' (support, threshold, box)");
    ip.residual_tol = residual_tol;
    ip.max_index = max_index;
    ip.box_N = box_N;

    const auto built = erlmix::build_mixture(f, n, ip);
    const fs::path path = resolve_out(out);
    atomic_write(path, erlmix::mixture_to_json(built.mixture).dump(2) + "\n");
    std::printf("wrote %s: components=%zu residual=%.17g\n",
                path.string().c_str(), built.mixture.components.size(),
                built.mixture.residual);
    return kExitOk;
}

// Mixture files list every nonzero cell mass inside the enumerated box, so a
// table rebuilt from one treats unlisted in-box cells as zero and the stored
// residual as mass beyond the box.
erlmix::CellMassTable table_from_mixture(const erlmix::ErlangMixture& g,
                                         std::int64_t want_N) {
    erlmix::CellMassTable table;
    table.d = g.d;
    table.n = g.n;
    table.residual = g.residual;
    table.n_max.assign(static_cast<std::size_t>(g.d), want_N);
    for (const auto& [m, w] : g.components) {
        table.masses[m] = w;
        for (int j = 0; j < g.d; ++j) {
            auto& cov = table.n_max[static_cast<std::size_t>(j)];
            cov = std::max(cov, m[static_cast<std::size_t>(j)]);
        }
    }
    return table;
}

int cmd_truncate(const std::string& in, const std::string& mode, std::int64_t N,
                 const std::string& relocate, double M, double nu, double p,
                 double eta, const std::string& out) {
    const auto g = erlmix::mixture_from_json(load_json(in));
    erlmix::TruncationPlan plan;
    if (mode == "compact")
        plan.mode = erlmix::TruncationPlan::Mode::compact;
    else if (mode == "weighted-sup")
        plan.mode = erlmix::TruncationPlan::Mode::weighted_sup;
    else if (mode == "weighted-lp")
        plan.mode = erlmix::TruncationPlan::Mode::weighted_lp;
    else if (mode == "lp")
        plan.mode = erlmix::TruncationPlan::Mode::generic_lp;
    else
        throw ConfigError("unknown mode '" + mode +
                          "' (compact, weighted-sup, weighted-lp, lp)");
    plan.N = N;
    plan.relocation = relocate == "origin"
                          ? erlmix::TruncationPlan::Relocation::origin
                          : erlmix::TruncationPlan::Relocation::corner;
    plan.M = M;
    plan.nu = nu;
    plan.p = p;
    plan.eta = eta;

    const auto table = table_from_mixture(g, N);
    const auto result = erlmix::truncate(table, plan);
    const fs::path path = resolve_out(out);
    atomic_write(path, erlmix::mixture_to_json(result.mixture).dump(2) + "\n");
    std::printf("wrote %s: components=%zu tail_mass=%.17g bound=%.17g (%s)\n",
                path.string().c_str(), result.mixture.components.size(),
                result.tail_mass, result.bound, result.formula.c_str());
    return kExitOk;
}

int cmd_error(const DensityOpts& dopts, const std::string& mixture_file,
              const std::string& metric, double M, double nu, double eta,
              double p, int grid, int panels, const std::string& out) {
    const auto f = make_density(dopts);
    const auto g = erlmix::mixture_from_json(load_json(mixture_file));
    if (g.d != f.d) throw ConfigError("density and mixture dimensions differ");

    erlmix::NormSpec spec;
    spec.M = M;
    spec.nu = nu;
    spec.eta = eta;
    spec.p = p;
    spec.grid = grid;
    spec.panels_per_unit = panels;
    if (metric == "sup")
        spec.kind = erlmix::NormSpec::Kind::sup_box;
    else if (metric == "weighted-sup")
        spec.kind = erlmix::NormSpec::Kind::weighted_sup;
    else if (metric == "lp")
        spec.kind = erlmix::NormSpec::Kind::lp;
    else
        throw ConfigError("unknown metric '" + metric +
                          "' (sup, weighted-sup, lp)");
    if (spec.kind != erlmix::NormSpec::Kind::sup_box && !spec.domain)
        spec.domain = erlmix::mixture_tail_box(g, 1e-10);

    erlmix::Evaluator approx = [&g](std::span<const double> x) {
        return erlmix::mixture_pdf(g, x);
    };
    const double measured = erlmix::error_norm(f.evaluate, approx, f.d, spec);

    erlmix::ErrorReport report;
    report.metric = metric;
    report.d = f.d;
    report.n = g.n;
    report.K = static_cast<std::int64_t>(g.components.size());
    report.M = M;
    if (spec.kind == erlmix::NormSpec::Kind::weighted_sup) report.nu = nu;
    if (spec.kind == erlmix::NormSpec::Kind::lp) {
        report.eta = eta;
        report.p = p;
    }
    report.measured = measured;
    report.caveat = spec.kind == erlmix::NormSpec::Kind::lp
                        ? "quadrature_estimate"
                        : "grid_lower_bound";
    if (spec.kind == erlmix::NormSpec::Kind::sup_box && f.holder &&
        f.sup_bound) {
        // holder bound for the full operator plus the sup envelope of the
        // unrepresented mass
        report.alpha = f.holder->alpha;
        report.bound = erlmix::bound_compact_holder(f.holder->H,
                                                    f.holder->alpha, M, g.n,
                                                    f.d, *f.sup_bound) +
                       g.residual * std::pow(static_cast<double>(g.n), f.d);
        report.bound_formula = "compact_holder_plus_residual";
    }

    const fs::path path = resolve_out(out);
    atomic_write(path, report.to_json().dump(2) + "\n");
    const fs::path csv_path = fs::path(path).replace_extension(".csv");
    atomic_write(csv_path, erlmix::ErrorReport::csv_header() + "\n" +
                               report.csv_row() + "\n");
    std::printf("wrote %s: measured=%.17g", path.string().c_str(), measured);
    if (report.bound) std::printf(" bound=%.17g", *report.bound);
    std::printf("\n");
    return kExitOk;
}

erlmix::RateStudyConfig parse_study_config(const json& j) {
    erlmix::RateStudyConfig cfg;
    try {
        cfg.density = j.value("density", cfg.density);
        cfg.d = j.value("d", cfg.d);
        cfg.alpha = j.value("alpha", cfg.alpha);
        if (j.contains("params")) {
            const auto& p = j.at("params");
            cfg.params.M = p.value("M", cfg.params.M);
            cfg.params.alpha = p.value("alpha", cfg.alpha);
            cfg.params.beta = p.value("beta", cfg.params.beta);
            if (p.contains("rates"))
                cfg.params.rates = p.at("rates").get<std::vector<double>>();
            if (p.contains("shapes"))
                cfg.params.shapes =
                    p.at("shapes").get<std::vector<std::int64_t>>();
        } else {
            cfg.params.alpha = cfg.alpha;
        }
        const std::string mode = j.value("mode", std::string("scale"));
        if (mode == "scale")
            cfg.mode = erlmix::RateStudyConfig::Mode::scale_sweep;
        else if (mode == "component")
            cfg.mode = erlmix::RateStudyConfig::Mode::component_sweep;
        else
            throw ConfigError("mode must be 'scale' or 'component'");
        if (j.contains("n_values"))
            cfg.n_values = j.at("n_values").get<std::vector<int>>();
        if (j.contains("K_values"))
            cfg.K_values = j.at("K_values").get<std::vector<std::int64_t>>();
        const std::string sched = j.value("schedule", std::string("compact"));
        if (sched == "compact")
            cfg.schedule = erlmix::RateStudyConfig::ScheduleMode::compact;
        else if (sched == "weighted_sup")
            cfg.schedule = erlmix::RateStudyConfig::ScheduleMode::weighted_sup;
        else if (sched == "weighted_lp")
            cfg.schedule = erlmix::RateStudyConfig::ScheduleMode::weighted_lp;
        else
            throw ConfigError("unknown schedule '" + sched + "'");
        if (j.contains("metric")) {
            const auto& m = j.at("metric");
            const std::string kind = m.value("kind", std::string("sup"));
            if (kind == "sup")
                cfg.norm.kind = erlmix::NormSpec::Kind::sup_box;
            else if (kind == "weighted_sup")
                cfg.norm.kind = erlmix::NormSpec::Kind::weighted_sup;
            else if (kind == "lp")
                cfg.norm.kind = erlmix::NormSpec::Kind::lp;
            else
                throw ConfigError("unknown metric kind '" + kind + "'");
            cfg.norm.M = m.value("M", cfg.norm.M);
            cfg.norm.nu = m.value("nu", cfg.norm.nu);
            cfg.norm.eta = m.value("eta", cfg.norm.eta);
            cfg.norm.p = m.value("p", cfg.norm.p);
            cfg.norm.grid = m.value("grid", cfg.norm.grid);
            cfg.norm.panels_per_unit =
                m.value("panels_per_unit", cfg.norm.panels_per_unit);
            if (m.contains("domain"))
                cfg.norm.domain = m.at("domain").get<std::vector<double>>();
        }
        cfg.M = j.value("M", cfg.M);
        cfg.B = j.value("B", cfg.B);
        cfg.n0 = j.value("n0", cfg.n0);
        cfg.p = j.value("p", cfg.p);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.slope_window = j.value("slope_window", cfg.slope_window);
        cfg.component_window =
            j.value("component_window", cfg.component_window);
        cfg.require_slope_match =
            j.value("require_slope_match", cfg.require_slope_match);
        cfg.operator_tail_tol =
            j.value("operator_tail_tol", cfg.operator_tail_tol);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("rate study config: ") + e.what());
    }
    return cfg;
}

int cmd_rate_study(const std::string& config_file, std::optional<std::uint64_t> seed,
                   std::string out_prefix) {
    const json j = load_json(config_file);
    erlmix::RateStudyConfig cfg = parse_study_config(j);
    if (seed) cfg.seed = *seed;
    if (out_prefix.empty())
        out_prefix = j.value("out_prefix", std::string("rate_study"));

    const bool scale = cfg.mode == erlmix::RateStudyConfig::Mode::scale_sweep;
    erlmix::RateStudy study;
    try {
        study = scale ? erlmix::run_scale_sweep(cfg)
                      : erlmix::run_component_sweep(cfg);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const json summary = study.summary(cfg);
    const fs::path csv_path = resolve_out(out_prefix + ".csv");
    const fs::path json_path = resolve_out(out_prefix + ".json");
    atomic_write(csv_path, study.csv(scale ? "n" : "K"));
    atomic_write(json_path, summary.dump(2) + "\n");
    std::printf(
        "wrote %s, %s: slope=%.6g predicted=%.6g window=%.3g pass=%s\n",
        csv_path.string().c_str(), json_path.string().c_str(),
        study.fit.valid ? study.fit.slope : 0.0, study.predicted_exponent,
        study.window, summary.at("pass").get<bool>() ? "true" : "false");
    return summary.at("pass").get<bool>() ? kExitOk : kExitCheckFailed;
}

struct Check {
    std::string name;
    bool ok;
    std::string detail;
};

int cmd_verify() {
    using namespace erlmix;
    std::vector<Check> checks;
    auto add = [&](const std::string& name, bool ok, std::string detail = "") {
        checks.push_back({name, ok, std::move(detail)});
    };

    {
        bool ok = true;
        for (int n : {1, 3, 8})
            for (std::int64_t m = 1; m <= 200 && ok; ++m)
                ok = erlang_sup_norm_exact(m, n) <=
                     erlang_sup_norm_bound(m, n) * (1.0 + 1e-12);
        add("erlang_sup_below_envelope", ok);
    }
    {
        bool ok = true;
        for (std::int64_t m : {std::int64_t{1}, std::int64_t{5}, std::int64_t{40}})
            for (double x : {0.1, 1.0, 7.5, 30.0}) {
                const ErlangParams e{m, 2.0};
                const double c = erlang_cdf(e, x), s = erlang_sf(e, x);
                if (std::abs(c + s - 1.0) > 1e-12 || c < 0.0 || c > 1.0)
                    ok = false;
            }
        add("erlang_cdf_sf_complement", ok);
    }
    {
        const auto f = zoo_density("product_exponential", 1);
        IndexPolicy ip;
        ip.mode = IndexPolicy::Mode::mass_threshold;
        ip.residual_tol = 1e-13;
        const auto built = build_mixture(f, 4, ip);
        double worst = 0.0;
        for (double x : {0.0, 0.3, 1.0, 2.5}) {
            const std::vector<double> pt{x};
            worst = std::max(worst,
                             std::abs(operator_eval(f, 4, pt, 1e-14) -
                                      mixture_pdf(built.mixture, pt)));
        }
        add("representation_identity", worst <= 1e-10,
            "max gap " + std::to_string(worst));
    }
    {
        const std::vector<double> x{1.0, 1.0};
        const auto dm = displacement_moments(x, 4, 2);
        add("displacement_moment_identity",
            std::abs(dm.second_moment - 13.0 / 24.0) < 1e-15);
    }
    {
        const auto f = zoo_density("product_exponential", 2);
        IndexPolicy ip;
        ip.mode = IndexPolicy::Mode::mass_threshold;
        ip.residual_tol = 1e-9;
        const auto built = build_mixture(f, 3, ip);
        double sum = built.mixture.residual;
        for (const auto& [m, w] : built.mixture.components) sum += w;
        add("mixture_mass_accounting", std::abs(sum - 1.0) <= 1e-12);
    }
    {
        const auto f = zoo_density("product_exponential", 1);
        IndexPolicy ip;
        ip.mode = IndexPolicy::Mode::fixed_box;
        ip.box_N = 20;
        const auto built = build_mixture(f, 2, ip);
        TruncationPlan plan;
        plan.mode = TruncationPlan::Mode::weighted_sup;
        plan.N = 8;
        const auto res = truncate(built.table, plan);
        double sum = res.mixture.residual;
        for (const auto& [m, w] : res.mixture.components) sum += w;
        add("truncation_mass_preserved",
            std::abs(sum - 1.0) <= 1e-12 &&
                res.mixture.components.size() <= 9);
    }
    {
        TruncationPlan plan;
        plan.mode = TruncationPlan::Mode::compact;
        plan.N = 4;
        plan.M = 1.0;
        const double v = truncation_bound(plan, 2, 1);
        const double want = (8.0 / 3.0) * std::exp(-2.0);
        add("compact_tail_bound_value", std::abs(v - want) <= 1e-12 * want);
    }
    {
        bool ok = true;
        for (const auto& [p, eta, nu, d] :
             {std::tuple{1.0, 2.0, 0.0, 1}, std::tuple{2.0, 4.0, 0.5, 2},
              std::tuple{1.5, 6.0, 1.0, 3}}) {
            const double a = constant_B(p, eta, nu, d);
            const double b = constant_B_quadrature(p, eta, nu, d);
            if (std::abs(a - b) > 1e-6 * std::abs(a)) ok = false;
        }
        add("constant_B_closed_vs_quadrature", ok);
    }
    {
        const auto s = schedule_compact(48, 1, 1.0, 1.0, 3.0, 2);
        add("compact_schedule_arithmetic", s.nK == 16 && s.N == 32 &&
                                               s.K0 == 12 &&
                                               s.predicted_exponent == -0.5);
    }
    {
        auto term = [](std::int64_t i) {
            return std::sin(static_cast<double>(i) * 0.001) /
                   (1.0 + static_cast<double>(i));
        };
        const int saved = par::max_threads();
        par::set_threads(1);
        const double one = par::block_sum(100000, term);
        par::set_threads(saved);
        const double many = par::block_sum(100000, term);
        add("reduction_thread_invariant", one == many);
    }
    {
        StreamRng a(42, 7), b(42, 7);
        bool ok = true;
        for (int i = 0; i < 100; ++i)
            if (a.uniform() != b.uniform()) ok = false;
        add("rng_substream_determinism", ok);
    }
    {
        bool ok = true;
        std::string bad;
        for (const auto& name : zoo_names()) {
            if (name == "erlang_mixture_reference") continue;
            try {
                validate_density(zoo_density(name, 1), 1e-8);
            } catch (const std::exception&) {
                ok = false;
                bad = name;
            }
        }
        add("zoo_densities_normalized", ok, bad);
    }

    bool all = true;
    for (const auto& c : checks) {
        std::printf("%s %s%s%s\n", c.ok ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.empty() ? "" : " : ", c.detail.c_str());
        if (!c.ok) all = false;
    }
    std::printf("%zu checks, %s\n", checks.size(), all ? "all passed" : "FAILURES");
    return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Finite Erlang mixture approximations of densities on the positive "
        "orthant"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker thread count (0 = default)");

    DensityOpts approx_density;
    int approx_n = 8;
    std::string approx_policy = "threshold";
    double approx_tol = 1e-9;
    std::int64_t approx_max_index = 65536;
    std::int64_t approx_box_N = 0;
    std::string approx_out = "mixture.json";
    auto* approx = app.add_subcommand(
        "approximate", "build the scale-n mixture for a target density");
    add_density_opts(approx, approx_density);
    approx->add_option("--n", approx_n, "scale index")->check(CLI::PositiveNumber);
    approx->add_option("--policy", approx_policy,
                       "index policy: support, threshold, box");
    approx->add_option("--residual-tol", approx_tol, "threshold stop residual");
    approx->add_option("--max-index", approx_max_index, "per-axis cap");
    approx->add_option("--box-N", approx_box_N, "box policy bound");
    approx->add_option("-o,--out", approx_out, "output mixture file");

    std::string trunc_in, trunc_mode = "compact", trunc_reloc = "corner";
    std::int64_t trunc_N = 1;
    double trunc_M = 1.0, trunc_nu = 0.0, trunc_p = 2.0, trunc_eta = 0.0;
    std::string trunc_out = "truncated.json";
    auto* trunc = app.add_subcommand(
        "truncate", "restrict a mixture to the index cube F_N with a "
                    "certified gap");
    trunc->add_option("-i,--in", trunc_in, "input mixture file")->required();
    trunc->add_option("--mode", trunc_mode,
                      "compact, weighted-sup, weighted-lp, lp");
    trunc->add_option("--N", trunc_N, "per-axis index cap")->required();
    trunc->add_option("--relocate", trunc_reloc, "corner or origin");
    trunc->add_option("--M", trunc_M, "compact mode cube");
    trunc->add_option("--nu", trunc_nu, "weighted-sup weight index");
    trunc->add_option("--p", trunc_p, "integrability index");
    trunc->add_option("--eta", trunc_eta, "weighted-lp weight index");
    trunc->add_option("-o,--out", trunc_out, "output mixture file");

    DensityOpts err_density;
    std::string err_mixture, err_metric = "sup";
    double err_M = 1.0, err_nu = 0.0, err_eta = 0.0, err_p = 2.0;
    int err_grid = 201, err_panels = 8;
    std::string err_out = "error_report.json";
    auto* err = app.add_subcommand(
        "error", "measure the distance between a density and a mixture");
    add_density_opts(err, err_density);
    err->add_option("--mixture", err_mixture, "mixture file")->required();
    err->add_option("--metric", err_metric, "sup, weighted-sup, lp");
    err->add_option("--box", err_M, "sup metric cube");
    err->add_option("--nu", err_nu, "weighted-sup weight index");
    err->add_option("--eta", err_eta, "lp weight index");
    err->add_option("--p", err_p, "lp exponent");
    err->add_option("--grid", err_grid, "grid points per axis");
    err->add_option("--panels", err_panels, "lp panels per unit length");
    err->add_option("-o,--out", err_out, "output report file");

    std::string study_config, study_prefix;
    std::optional<std::uint64_t> study_seed;
    auto* study = app.add_subcommand(
        "rate-study", "sweep n or K and fit the observed convergence rate");
    study->add_option("-c,--config", study_config, "study config (JSON)")
        ->required();
    std::uint64_t seed_holder = 0;
    auto* seed_opt = study->add_option("--seed", seed_holder,
                                       "override the config seed");
    study->add_option("--out-prefix", study_prefix,
                      "output prefix for .csv and .json");

    app.add_subcommand("verify", "run the library invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (threads > 0) erlmix::par::set_threads(threads);
    if (seed_opt->count() > 0) study_seed = seed_holder;

    try {
        if (app.got_subcommand("approximate"))
            return cmd_approximate(approx_density, approx_n, approx_policy,
                                   approx_tol, approx_max_index, approx_box_N,
                                   approx_out);
        if (app.got_subcommand("truncate"))
            return cmd_truncate(trunc_in, trunc_mode, trunc_N, trunc_reloc,
                                trunc_M, trunc_nu, trunc_p, trunc_eta,
                                trunc_out);
        if (app.got_subcommand("error"))
            return cmd_error(err_density, err_mixture, err_metric, err_M,
                             err_nu, err_eta, err_p, err_grid, err_panels,
                             err_out);
        if (app.got_subcommand("rate-study"))
            return cmd_rate_study(study_config, study_seed, study_prefix);
        if (app.got_subcommand("verify")) return cmd_verify();
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "computation failed: " << e.what() << "\n";
        return kExitComputation;
    }
    return kExitConfig;
}
