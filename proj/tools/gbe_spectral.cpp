#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gbe_spectral/linalg.hpp"
#include "gbe_spectral/moments.hpp"
#include "gbe_spectral/ratpoly.hpp"
#include "gbe_spectral/report.hpp"
#include "gbe_spectral/sampler.hpp"
#include "gbe_spectral/special.hpp"

namespace fs = std::filesystem;
using gbe::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

gbe::BigRational parse_alpha_exact(const std::string& text) {
    gbe::BigRational alpha;
    try {
        alpha = gbe::parse_rational(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--alpha: ") + e.what());
    }
    if (alpha < 0) throw UsageError("--alpha must be >= 0, got " + text);
    return alpha;
}

double parse_positive_alpha(const std::string& text) {
    const gbe::BigRational alpha = parse_alpha_exact(text);
    if (alpha == 0) throw UsageError("--alpha must be > 0 for this command");
    return static_cast<double>(alpha);
}

/// `out` with its extension replaced by `suffix`.
fs::path sibling(const fs::path& out, const std::string& suffix) {
    fs::path p = out;
    p.replace_extension();
    p += suffix;
    return p;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << content;
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Writes the manifest next to `out`, listing every file it describes.
void write_manifest(gbe::RunManifest manifest, const fs::path& out, const std::vector<fs::path>& files) {
    for (const auto& f : files) manifest.outputs.push_back(f.filename().string());
    write_file(sibling(out, ".manifest.json"), dump(gbe::to_json(manifest)));
}

unsigned resolve_threads(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    if (const char* env = std::getenv("GBE_SPECTRAL_THREADS"); env != nullptr && *env != '\0') {
        try {
            const int n = std::stoi(env);
            if (n > 0) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("GBE_SPECTRAL_THREADS must be a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t fresh_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::vector<double> symmetric_grid(double half_width, int points) {
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(points));
    const int last = points - 1;
    for (int i = 0; i < points; ++i) grid.push_back(half_width * static_cast<double>(2 * i - last) / last);
    return grid;
}

// ---------------------------------------------------------------------------
// moments

struct MomentsArgs {
    std::string alpha;
    int n = 10;
    bool checks = false;
    std::string out;
};

int cmd_moments(const MomentsArgs& a) {
    const gbe::BigRational alpha = parse_alpha_exact(a.alpha);
    const double alpha_d = static_cast<double>(alpha);
    const gbe::MomentSequence u = gbe::u_sequence_numeric(alpha_d, a.n);
    const std::vector<gbe::BigRational> u_exact = gbe::u_sequence(alpha, a.n);

    Json doc;
    doc["alpha"] = alpha_d;
    doc["alpha_exact"] = gbe::to_fraction_string(alpha);
    doc["n_max"] = a.n;
    doc["u"] = u.values;
    Json exact = Json::array();
    for (const auto& v : u_exact) exact.push_back(gbe::to_fraction_string(v));
    doc["u_exact"] = std::move(exact);

    bool ok = true;
    if (a.checks) {
        bool duality = true, dyck = true, u_h = true;
        const gbe::VerifyConfig defaults;
        for (const auto& beta_hat : defaults.beta_hats)
            for (int p = 0; p <= std::min(a.n, gbe::kWalkEnumerationLimit); ++p)
                duality = duality && gbe::verify_duality(p, beta_hat);
        for (int p = 0; p <= std::min(a.n, gbe::kDyckEnumerationLimit); ++p) {
            dyck = dyck && gbe::dyck_weight_sum(p, alpha) == u_exact[static_cast<std::size_t>(p)];
            u_h = u_h && gbe::verify_u_h_relation(p);
        }
        doc["checks"] = {{"duality", duality}, {"dyck", dyck}, {"u_h", u_h}};
        ok = duality && dyck && u_h;
    } else {
        doc["checks"] = nullptr;
    }

    auto manifest = gbe::make_manifest("moments", {{"alpha", a.alpha}, {"n", a.n}, {"checks", a.checks}});
    if (a.out.empty()) {
        doc["manifest"] = gbe::to_json(manifest);
        std::cout << dump(doc);
    } else {
        write_file(a.out, dump(doc));
        write_manifest(manifest, a.out, {a.out});
    }
    return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// density

struct DensityArgs {
    std::string alpha;
    double ymax = 6.0;
    int points = 601;
    std::string method = "auto";
    std::string out;
};

int cmd_density(const DensityArgs& a) {
    gbe::DensityParams params;
    params.alpha = parse_positive_alpha(a.alpha);
    try {
        params.method = gbe::parse_fhat_method(a.method);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--method: ") + e.what());
    }

    std::vector<std::vector<double>> rows;
    std::map<std::string, int> method_counts;
    double max_error_estimate = 0.0;
    double max_discrepancy = 0.0;
    int compared = 0;
    Json failures = Json::array();
    for (double y : symmetric_grid(a.ymax, a.points)) {
        double value = std::numeric_limits<double>::quiet_NaN();
        try {
            const gbe::FhatEvaluation ev = gbe::f_hat_detailed(y, params);
            value = std::exp(-0.5 * y * y - 0.5 * std::log(2.0 * std::numbers::pi) - 2.0 * ev.scaled.log_abs());
            ++method_counts[gbe::to_string(ev.method)];
            max_error_estimate = std::max(max_error_estimate, ev.relative_error);
            if (ev.agreement) {
                ++compared;
                max_discrepancy = std::max(max_discrepancy, *ev.agreement);
            }
        } catch (const std::runtime_error& e) {
            failures.push_back({{"y", y}, {"error", e.what()}});
        }
        rows.push_back({y, value});
    }

    Json sidecar;
    sidecar["parameters"] = {{"alpha", params.alpha},      {"ymax", a.ymax},
                             {"points", a.points},         {"method", gbe::to_string(params.method)},
                             {"x_switch", params.x_switch}, {"agreement_tol", params.agreement_tol}};
    try {
        const gbe::DensityMomentCheck check = gbe::density_moment_check(params, 0);
        sidecar["normalization"] = check.even_moments[0];
        sidecar["normalization_deviation"] = check.even_relative_deviation[0];
        sidecar["normalization_radius"] = check.radius;
    } catch (const std::runtime_error& e) {
        sidecar["normalization"] = nullptr;
        failures.push_back({{"normalization", true}, {"error", e.what()}});
    }
    sidecar["method_counts"] = method_counts;
    sidecar["max_relative_error_estimate"] = max_error_estimate;
    sidecar["method_agreement"] = {{"points_compared", compared}, {"max_relative_discrepancy", max_discrepancy}};
    sidecar["failures"] = failures;

    std::ostringstream csv;
    gbe::write_csv(csv, {"y", "density"}, rows);
    Json raw{{"alpha", a.alpha}, {"ymax", a.ymax}, {"points", a.points}, {"method", a.method}};
    auto manifest = gbe::make_manifest("density", raw);
    if (a.out.empty()) {
        std::cout << csv.str();
        sidecar["manifest"] = gbe::to_json(manifest);
        std::cerr << dump(sidecar);
    } else {
        const fs::path side = sibling(a.out, ".json");
        write_file(a.out, csv.str());
        write_file(side, dump(sidecar));
        write_manifest(manifest, a.out, {a.out, side});
    }
    if (!failures.empty()) {
        std::cerr << "density: " << failures.size() << " evaluation failure(s), see diagnostics\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
    int pmax = gbe::kWalkEnumerationLimit;
    std::vector<std::string> beta_hats{"1/2", "1", "2", "3/7"};
    std::string out;
};

int cmd_verify(const VerifyArgs& a) {
    gbe::VerifyConfig cfg;
    cfg.p_max = a.pmax;
    cfg.beta_hats.clear();
    for (const auto& s : a.beta_hats) {
        gbe::BigRational b;
        try {
            b = gbe::parse_rational(s);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--beta-hats: ") + e.what());
        }
        if (b <= 0) throw UsageError("--beta-hats values must be > 0, got " + s);
        cfg.beta_hats.push_back(b);
    }
    const gbe::VerifyReport report = gbe::run_verification(cfg);
    Json doc = gbe::to_json(report);
    auto manifest = gbe::make_manifest("verify", {{"pmax", a.pmax}, {"beta_hats", a.beta_hats}});
    if (a.out.empty()) {
        doc["manifest"] = gbe::to_json(manifest);
        std::cout << dump(doc);
    } else {
        write_file(a.out, dump(doc));
        write_manifest(manifest, a.out, {a.out});
    }
    for (const auto& f : report.failures()) {
        std::cerr << "FAILED " << f.check << " p=" << f.p;
        if (f.beta_hat) std::cerr << " beta_hat=" << gbe::to_fraction_string(*f.beta_hat);
        if (f.alpha) std::cerr << " alpha=" << gbe::to_fraction_string(*f.alpha);
        std::cerr << '\n';
    }
    return report.all_passed() ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
    std::string alpha;
    int trunc = 200;
    std::int64_t samples = 10000;
    int pmax = 4;
    int bins = 60;
    double ymax = 6.0;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
    int threads = 0;
    int chunk_size = 1000;
    bool doubling_check = false;
};

int cmd_sample(const SampleArgs& a) {
    const double alpha = parse_positive_alpha(a.alpha);
    if (a.trunc < a.pmax + 1)
        throw UsageError("--trunc must be >= pmax + 1 (" + std::to_string(a.pmax + 1) + ") for exact moments");
    const std::uint64_t seed = a.seed ? *a.seed : fresh_seed();
    gbe::McOptions opt;
    opt.threads = resolve_threads(a.threads);
    opt.chunk_size = a.chunk_size;

    gbe::McReport report = gbe::mc_mean_moments(alpha, a.trunc, a.samples, a.pmax, gbe::RngStream(seed, 0), opt);
    if (a.bins > 0) {
        const gbe::McReport hist = gbe::mc_histogram(alpha, a.trunc, a.samples, a.bins, a.ymax, gbe::RngStream(seed, 1), opt);
        report.histogram = hist.histogram;
        report.out_of_range = hist.out_of_range;
        report.y_max = hist.y_max;
    }
    Json doc = gbe::to_json(report);
    if (a.doubling_check) {
        if (a.bins == 0) throw UsageError("--doubling-check needs a histogram (--bins > 0)");
        const gbe::DoublingCheck check =
            gbe::truncation_doubling_check(alpha, a.trunc, a.samples, a.bins, a.ymax, gbe::RngStream(seed, 2), opt);
        doc["truncation_check"] = {{"truncation", check.truncation},
                                   {"doubled", 2 * check.truncation},
                                   {"max_abs_difference", check.max_abs_difference},
                                   {"max_abs_z", check.max_abs_z}};
    }

    std::vector<std::vector<double>> rows;
    for (const auto& b : report.histogram) rows.push_back({b.center, b.mass, b.std_error});
    std::ostringstream csv;
    gbe::write_csv(csv, {"bin_center", "mass", "std_error"}, rows);

    // thread count is deliberately left out: it never changes the output
    Json raw{{"alpha", a.alpha}, {"trunc", a.trunc},   {"samples", a.samples},       {"pmax", a.pmax},
             {"bins", a.bins},   {"ymax", a.ymax},     {"format", a.format},         {"chunk_size", a.chunk_size},
             {"doubling_check", a.doubling_check}, {"seed_generated", !a.seed.has_value()}};
    auto manifest = gbe::make_manifest("sample", raw, seed);
    if (a.out.empty()) {
        Json with_manifest = doc;
        with_manifest["manifest"] = gbe::to_json(manifest);
        if (a.format == "json") {
            std::cout << dump(with_manifest);
        } else {
            std::cout << csv.str();
            std::cerr << dump(with_manifest);
        }
    } else if (a.format == "json") {
        write_file(a.out, dump(doc));
        write_manifest(manifest, a.out, {a.out});
    } else {
        const fs::path side = sibling(a.out, ".report.json");
        write_file(a.out, csv.str());
        write_file(side, dump(doc));
        write_manifest(manifest, a.out, {a.out, side});
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// semicircle

struct SemicircleArgs {
    std::vector<std::string> alphas{"4", "16", "64"};
    double xmax = 2.5;
    int points = 501;
    double window = 1.9;
    std::string out;
};

int cmd_semicircle(const SemicircleArgs& a) {
    std::vector<double> alphas;
    for (const auto& s : a.alphas) alphas.push_back(parse_positive_alpha(s));
    const std::vector<double> grid = symmetric_grid(a.xmax, a.points);

    std::vector<std::string> header{"x", "semicircle"};
    for (double al : alphas) header.push_back("alpha_" + gbe::format_number(al));
    std::vector<double> sup(alphas.size(), 0.0), tail(alphas.size(), 0.0), edge(alphas.size(), 0.0);
    std::vector<std::vector<double>> rows;
    for (double x : grid) {
        const double sc = gbe::semicircle_density(x);
        std::vector<double> row{x, sc};
        for (std::size_t k = 0; k < alphas.size(); ++k) {
            gbe::DensityParams p;
            p.alpha = alphas[k];
            const double v = gbe::rescaled_density(x, p);
            row.push_back(v);
            if (std::abs(x) <= a.window) sup[k] = std::max(sup[k], std::abs(v - sc));
            if (std::abs(x) > 2.0) tail[k] = std::max(tail[k], v);
            if (std::abs(x) == a.xmax) edge[k] = std::max(edge[k], v);
        }
        rows.push_back(std::move(row));
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < sup.size(); ++k) decreasing = decreasing && sup[k] < sup[k - 1];

    Json sidecar;
    sidecar["parameters"] = {{"alphas", alphas}, {"xmax", a.xmax}, {"points", a.points}, {"window", a.window}};
    Json per_alpha = Json::array();
    for (std::size_t k = 0; k < alphas.size(); ++k)
        per_alpha.push_back({{"alpha", alphas[k]}, {"sup_deviation", sup[k]}, {"max_outside_support", tail[k]}, {"tail_at_xmax", edge[k]}});
    sidecar["deviations"] = std::move(per_alpha);
    sidecar["sup_deviation_decreasing"] = decreasing;

    std::ostringstream csv;
    gbe::write_csv(csv, header, rows);
    auto manifest = gbe::make_manifest(
        "semicircle", {{"alphas", a.alphas}, {"xmax", a.xmax}, {"points", a.points}, {"window", a.window}});
    if (a.out.empty()) {
        std::cout << csv.str();
        sidecar["manifest"] = gbe::to_json(manifest);
        std::cerr << dump(sidecar);
    } else {
        const fs::path side = sibling(a.out, ".json");
        write_file(a.out, csv.str());
        write_file(side, dump(sidecar));
        write_manifest(manifest, a.out, {a.out, side});
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moments, density and Monte Carlo sampling of the mean spectral measure of J_alpha"};
    app.set_version_flag("--version", gbe::kToolVersion);
    app.require_subcommand(1);

    std::function<int()> run;

    MomentsArgs moments;
    auto* m = app.add_subcommand("moments", "Moment sequence u_n(alpha) with optional identity checks");
    m->add_option("--alpha", moments.alpha, "alpha >= 0, integer, decimal or p/q")->required();
    m->add_option("--n", moments.n, "largest moment index")->capture_default_str()->check(CLI::Range(0, 200));
    m->add_flag("--checks", moments.checks, "run duality, Dyck-path and u/h identity checks");
    m->add_option("--out", moments.out, "JSON output file (default: stdout)");
    m->callback([&] { run = [&] { return cmd_moments(moments); }; });

    DensityArgs density;
    auto* d = app.add_subcommand("density", "Density of the mean spectral measure on a symmetric grid");
    d->add_option("--alpha", density.alpha, "alpha > 0")->required();
    d->add_option("--ymax", density.ymax, "grid half-width")->capture_default_str()->check(CLI::PositiveNumber);
    d->add_option("--points", density.points, "grid points")->capture_default_str()->check(CLI::Range(2, 10000000));
    d->add_option("--method", density.method, "auto, kummer or quadrature")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "kummer", "quadrature"}));
    d->add_option("--out", density.out, "CSV output file; diagnostics go to <stem>.json (default: stdout)");
    d->callback([&] { run = [&] { return cmd_density(density); }; });

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "Exact identity report");
    v->add_option("--pmax", verify.pmax, "largest walk length index")
        ->capture_default_str()
        ->check(CLI::Range(0, gbe::kWalkEnumerationLimit));
    v->add_option("--beta-hats", verify.beta_hats, "comma-separated positive rationals")
        ->delimiter(',')
        ->capture_default_str();
    v->add_option("--out", verify.out, "JSON output file (default: stdout)");
    v->callback([&] { run = [&] { return cmd_verify(verify); }; });

    SampleArgs sample;
    std::uint64_t seed_value = 0;
    auto* s = app.add_subcommand("sample", "Monte Carlo moments and spectral histogram of truncated J_alpha");
    s->add_option("--alpha", sample.alpha, "alpha > 0")->required();
    s->add_option("--trunc", sample.trunc, "truncation size M")->capture_default_str()->check(CLI::Range(1, 100000));
    s->add_option("--samples", sample.samples, "number of matrices")
        ->capture_default_str()
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
    s->add_option("--pmax", sample.pmax, "largest moment index")->capture_default_str()->check(CLI::Range(0, 1000));
    s->add_option("--bins", sample.bins, "histogram bins (0 skips the histogram)")
        ->capture_default_str()
        ->check(CLI::Range(0, 1000000));
    s->add_option("--ymax", sample.ymax, "histogram half-width")->capture_default_str()->check(CLI::PositiveNumber);
    auto* seed_opt = s->add_option("--seed", seed_value, "64-bit seed (generated and recorded if absent)");
    s->add_option("--out", sample.out, "output file (default: stdout)");
    s->add_option("--format", sample.format, "csv (histogram) or json (full report)")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--threads", sample.threads, "worker threads (default: GBE_SPECTRAL_THREADS or all cores)")
        ->check(CLI::Range(1, 4096));
    s->add_flag("--doubling-check", sample.doubling_check,
                "also compare the histogram at truncation 2M against M (paired, same draws)");
    s->add_option("--chunk-size", sample.chunk_size, "samples per deterministic work chunk")
        ->capture_default_str()
        ->check(CLI::Range(1, 100000000));
    s->callback([&] {
        if (seed_opt->count() > 0) sample.seed = seed_value;
        run = [&] { return cmd_sample(sample); };
    });

    SemicircleArgs semi;
    auto* c = app.add_subcommand("semicircle", "Rescaled densities next to the semicircle law");
    c->add_option("--alphas", semi.alphas, "comma-separated alpha values")->delimiter(',')->capture_default_str();
    c->add_option("--xmax", semi.xmax, "grid half-width")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--points", semi.points, "grid points")->capture_default_str()->check(CLI::Range(2, 10000000));
    c->add_option("--window", semi.window, "half-width of the sup-deviation window")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    c->add_option("--out", semi.out, "CSV output file; deviations go to <stem>.json (default: stdout)");
    c->callback([&] { run = [&] { return cmd_semicircle(semi); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        return run();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}
