// Command-line front end. All statistics live behind the shared library's C
// surface (include/epiconf.h); this file only parses flags, forwards them as
// key=value configuration, prints the summary, and writes CSV artifacts.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>

#include "CLI11.hpp"
#include "epiconf.h"

namespace {

struct OptionSpec {
    const char* key;
    const char* help;
};

constexpr OptionSpec kOptions[] = {
    {"model", "model name (normal_location, curved_normal, gamma_shape, ...)"},
    {"y", "observed data, comma separated"},
    {"t", "observed statistic value"},
    {"n", "sample size"},
    {"theta", "parameter value or grid ('a,b,c' or 'lo:hi:step')"},
    {"theta0", "null parameter value"},
    {"theta-section", "parameter at which prior sections are evaluated"},
    {"gamma", "interval confidence level"},
    {"gamma1", "tail mass above the interval"},
    {"gamma2", "gamma1 + gamma"},
    {"nsim", "Monte Carlo replicates per grid point"},
    {"seed", "64-bit RNG seed (required for stochastic runs)"},
    {"points", "density grid points"},
    {"method", "coverage method: auto, exact, quadrature, mc"},
    {"workers", "worker threads (0 = all hardware threads)"},
    {"bins", "conditioning bins for continuous statistics"},
    {"min-n", "minimum replicates per bin for a solid verdict"},
    {"candidate", "conditioning statistic id (range, min, max, mean, ...)"},
    {"proc", "interval procedure: marginal, conditional, minmax, mle-guess, "
             "full-recip, full-const"},
    {"rounds", "betting rounds"},
    {"agents", "comma list of agent policies, e.g. marginal,full"},
    {"mode", "dutchbook mode: market or two-agent"},
    {"price-nsim", "replicates behind Monte Carlo prices"},
    {"sum-t", "gamma-shape natural statistic total, sum(log y_i - y_i)"},
    {"sizes", "family sizes, comma separated"},
    {"families", "comma list from binomial, negative_binomial"},
    {"datasets", "number of simulated datasets"},
    {"criterion", "run a single acceptance criterion"},
};

constexpr const char* kTolerances[] = {
    "prior-flat-rel", "mc-se-mult", "gamma-mle-abs", "updating-rel",
    "density-floor", "prior-route-rel", "curved-prior-rel",
    "curved-prior-rel-pstar", "normalize-abs", "cc-cf-rel", "ratio-band-lo",
    "ratio-band-hi", "ratio-min-inside", "fig2-rel",
};

std::string describe(const std::string& name) {
    static const std::map<std::string, std::string> table = {
        {"accept", "run the acceptance suite (all criteria, or --criterion N)"},
        {"confdist", "confidence densities c_m, c_0, c_f for a model and datum"},
        {"coverage", "coverage of an interval procedure over a parameter grid"},
        {"scan", "hunt for relevant subsets over conditioning statistics"},
        {"dutchbook", "betting-market simulation against interval-backing agents"},
        {"discrete", "exact mid-P coverage fluctuation across family sizes"},
        {"example1", "three-point uniform: enumeration, conditional coverage, scan"},
        {"example2", "normal location: flat prior, coverage band, null scan"},
        {"example3", "uniform shift: one-sided intervals and the floor guess"},
        {"example4", "uniform width-2: flat full confidence on the overlap"},
        {"example5", "alias of fig1"},
        {"example6", "alias of fig2"},
        {"example7", "curved normal: conditional equals full confidence"},
        {"fig1", "gamma shape: implied-prior routes and the updating formula"},
        {"fig2", "N(theta,theta): per-datum priors and their agreement"},
        {"fig3", "curved normal: confidence vs exact conditional P-value"},
        {"figA2", "normal location: datum-dependent priors and prior sections"},
        {"figA3", "alias of discrete"},
    };
    auto it = table.find(name);
    if (it != table.end()) return it->second;
    if (name.rfind("accept", 0) == 0)
        return "run acceptance criterion " + name.substr(6) + " alone";
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("epiconf ") + epc_version() +
                 " -- confidence distributions, coverage experiments, "
                 "relevant-subset scans, and the betting market"};
    app.require_subcommand(1);

    std::map<std::string, std::string> config;
    std::string out_dir = ".";
    std::string config_path;

    for (size_t i = 0; i < epc_experiment_count(); ++i) {
        const std::string name = epc_experiment_name(i);
        CLI::App* sub = app.add_subcommand(name, describe(name));
        sub->add_option("--out", out_dir, "directory for CSV artifacts")
            ->capture_default_str();
        sub->add_option("--config", config_path,
                        "key = value options file ('#' comments); explicit "
                        "flags override it");
        for (const auto& spec : kOptions)
            sub->add_option_function<std::string>(
                "--" + std::string(spec.key),
                [&config, key = std::string(spec.key)](const std::string& v) {
                    config[key] = v;
                },
                spec.help);
        for (const char* tol : kTolerances)
            sub->add_option_function<std::string>(
                "--tol-" + std::string(tol),
                [&config, key = "tol-" + std::string(tol)](const std::string& v) {
                    config[key] = v;
                },
                "acceptance tolerance override");
        sub->add_flag_callback(
            "--exact", [&config] { config["method"] = "exact"; },
            "force exact enumeration (alias for --method exact)");
        sub->add_flag_callback(
            "--all", [] {}, "run every acceptance criterion (the default)");
    }

    CLI11_PARSE(app, argc, argv);

    const std::string experiment = app.get_subcommands().front()->get_name();

    std::unique_ptr<epc_session, decltype(&epc_session_free)> session(
        epc_session_new(), &epc_session_free);
    if (!session) {
        std::fprintf(stderr, "epiconf: out of memory\n");
        return 1;
    }

    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::fprintf(stderr, "epiconf: cannot read config file '%s'\n",
                         config_path.c_str());
            return 1;
        }
        std::stringstream text;
        text << in.rdbuf();
        if (epc_session_load(session.get(), text.str().c_str()) != 0) {
            std::fprintf(stderr, "epiconf: %s\n",
                         epc_error_message(session.get()));
            return 1;
        }
    }
    for (const auto& [key, value] : config)
        epc_session_set(session.get(), key.c_str(), value.c_str());

    const int rc = epc_run(session.get(), experiment.c_str());

    const std::string_view summary = epc_summary(session.get());
    if (!summary.empty()) {
        std::fwrite(summary.data(), 1, summary.size(), stdout);
        if (summary.back() != '\n') std::fputc('\n', stdout);
    }
    if (rc != 0)
        std::fprintf(stderr, "epiconf: %s\n", epc_error_message(session.get()));
    if (rc == 1) return 1;  // configuration errors produce no artifacts

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec && !std::filesystem::is_directory(out_dir)) {
        std::fprintf(stderr, "epiconf: cannot create output directory '%s'\n",
                     out_dir.c_str());
        return 1;
    }
    for (size_t i = 0; i < epc_output_count(session.get()); ++i) {
        const auto path = std::filesystem::path(out_dir) /
                          epc_output_name(session.get(), i);
        std::ofstream file(path, std::ios::binary);
        if (!(file << epc_output_content(session.get(), i)) || !file.flush()) {
            std::fprintf(stderr, "epiconf: cannot write '%s'\n",
                         path.string().c_str());
            return 1;
        }
        std::fprintf(stdout, "wrote %s\n", path.string().c_str());
    }
    return rc;
}
