// Command-line front end: analytic | speckle | hbt | scan.
//
// Usage:
//   tpi <subcommand> [--config file] [--seed N] [--out dir]
//                    [--section.key value ...]
//
// Dotted flags override config-file values, e.g. --geometry.d 0.135e-3.
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tpi/commands.hpp"

namespace {

// turn leftover "--section.key value" / "--section.key=value" tokens into
// config overrides
tpi::KeyValues parse_dotted(const std::vector<std::string>& extras) {
    tpi::KeyValues kv;
    for (std::size_t i = 0; i < extras.size(); ++i) {
        std::string tok = extras[i];
        if (tok.rfind("--", 0) != 0 || tok.find('.') == std::string::npos)
            throw std::invalid_argument("unrecognized argument: " + tok);
        tok = tok.substr(2);
        const auto eq = tok.find('=');
        if (eq != std::string::npos) {
            kv[tok.substr(0, eq)] = tok.substr(eq + 1);
        } else {
            if (i + 1 >= extras.size())
                throw std::invalid_argument("missing value for --" + tok);
            kv[tok] = extras[++i];
        }
    }
    return kv;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-photon double-slit interference workbench"};
    app.allow_extras();

    std::string config_path, out_dir = ".";
    bool seed_given = false;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed")->each([&](const std::string&) {
        seed_given = true;
    });

    CLI::App* sub_analytic = app.add_subcommand("analytic", "closed-form pattern CSVs");
    CLI::App* sub_speckle = app.add_subcommand("speckle", "speckle Monte Carlo correlation scan");
    CLI::App* sub_hbt = app.add_subcommand("hbt", "coincidence histogram and bunching check");
    CLI::App* sub_scan = app.add_subcommand("scan", "detector scan, pattern fit and resolution report");
    app.require_subcommand(1);
    for (CLI::App* sub : {sub_analytic, sub_speckle, sub_hbt, sub_scan}) {
        sub->allow_extras();
        sub->fallthrough();  // app-level --config/--out/--seed after the verb
    }

    CLI11_PARSE(app, argc, argv);

    try {
        tpi::KeyValues kv;
        if (!config_path.empty())
            kv = tpi::parse_config_file(config_path);
        std::vector<std::string> extras = app.remaining();
        for (CLI::App* sub : {sub_analytic, sub_speckle, sub_hbt, sub_scan}) {
            const auto more = sub->remaining();
            extras.insert(extras.end(), more.begin(), more.end());
        }
        for (const auto& [k, v] : parse_dotted(extras))
            kv[k] = v;

        tpi::RunConfig cfg = tpi::config_from_keys(kv);
        if (seed_given)
            cfg.seed = seed;

        if (sub_analytic->parsed()) {
            tpi::cmd_analytic(cfg, out_dir);
        } else if (sub_speckle->parsed()) {
            tpi::cmd_speckle(cfg, out_dir);
        } else if (sub_hbt->parsed()) {
            const auto out = tpi::cmd_hbt(cfg, out_dir);
            std::printf("g2(0) = %.4f  tau_c_fit = %.1f ns  net = %.0f\n",
                        out.bunching.g2_zero, out.bunching.tau_c_ns,
                        out.windowed.net);
        } else if (sub_scan->parsed()) {
            const auto out = tpi::cmd_scan(cfg, out_dir);
            std::printf("visibility = %.6f  period_ratio = %.6f  converged = %s\n",
                        out.visibility, out.resolution.ratio,
                        out.fit.converged ? "yes" : "no");
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
