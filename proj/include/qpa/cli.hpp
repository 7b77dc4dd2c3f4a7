// Copyright 2026 The qpa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. run_cli is the whole program; tools/qpa.cpp only
// forwards argv, so tests drive it in-process.
//
// Exit codes: 0 success, 1 validation error, 2 non-convergence, 3 capacity.

#ifndef QPA_CLI_HPP
#define QPA_CLI_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpa/divergence.hpp"
#include "qpa/errors.hpp"
#include "qpa/exponent.hpp"
#include "qpa/io.hpp"
#include "qpa/model.hpp"
#include "qpa/simulate.hpp"
#include "qpa/wiretap.hpp"

namespace qpa {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitConvergence = 2, kExitCapacity = 3 };

namespace cli {

struct Common {
    bool bits = false;
    bool timing = false;
    unsigned threads = 1;

    double scale() const { return bits ? 1.0 / std::log(2.0) : 1.0; }
    const char* units() const { return bits ? "bits" : "nats"; }
};

struct Input {
    std::string text;
    Json json;
};

inline Input load(const std::string& path) {
    Input in;
    in.text = read_text_file(path);
    in.json = parse_json_text(in.text, path);
    return in;
}

/// Prefixes schema errors with the file name.
template <typename F>
auto with_file(const std::string& path, F parse) {
    try {
        return parse();
    } catch (const InvalidInput& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

inline TypeDistribution pick_type(const std::vector<double>& prior, const std::vector<int>& counts,
                                  std::optional<int> n) {
    if (!counts.empty()) {
        TypeDistribution t(counts);
        if (t.alphabet_size() != prior.size()) {
            throw InvalidParameter("--counts has " + std::to_string(counts.size()) +
                                   " entries but the alphabet has " + std::to_string(prior.size()));
        }
        return t;
    }
    if (!n) throw InvalidParameter("either --counts or --n is required");
    return TypeDistribution::from_prior(prior, *n);
}

struct InfoArgs {
    std::string file;
};

inline Json cmd_info(const InfoArgs& a, const Common& c, RunManifest& m) {
    const Input in = load(a.file);
    m.input_hash = fnv1a_hex(in.text);
    const CQSource src = with_file(a.file, [&] { return source_from_json(in.json); });
    const double h = shannon_entropy(src.prior());
    const double i = holevo_mutual_info(src);
    Json r;
    r["units"] = c.units();
    r["alphabet"] = src.labels();
    r["alphabet_size"] = src.alphabet_size();
    r["state_dim"] = src.state_dim();
    r["entropy"] = h * c.scale();
    r["mutual_information"] = i * c.scale();
    r["conditional_entropy"] = (h - i) * c.scale();
    r["rate_limit"] = conditional_entropy_limit(src) * c.scale();
    return r;
}

struct AugustinArgs {
    std::string file;
    double alpha = 0.0;
    double tol = 1e-9;
    int max_iter = 10000;
    std::string variant = "sandwiched";
};

inline Json cmd_augustin(const AugustinArgs& a, const Common& c, RunManifest& m) {
    const Input in = load(a.file);
    m.input_hash = fnv1a_hex(in.text);
    m.parameters = {{"alpha", a.alpha}, {"tol", a.tol}, {"max_iter", a.max_iter}, {"variant", a.variant}};
    const CQSource src = with_file(a.file, [&] { return source_from_json(in.json); });
    Json r;
    r["units"] = c.units();
    r["variant"] = a.variant;
    r["alpha"] = a.alpha;
    if (a.variant == "petz") {
        r["value"] = augustin_petz_up(src, a.alpha) * c.scale();
        r["iterations"] = 0;
        r["final_step"] = 0.0;
        r["optimizer"] = matrix_to_json(marginal_state(src).matrix());
        return r;
    }
    AugustinOptions opts;
    opts.tol = a.tol;
    opts.max_iter = a.max_iter;
    const AugustinResult res = augustin_sandwiched(src, a.alpha, opts);
    r["value"] = res.value * c.scale();
    r["iterations"] = res.iterations;
    r["final_step"] = res.final_step;
    r["optimizer"] = matrix_to_json(res.optimizer.matrix());
    return r;
}

struct ExponentArgs {
    std::string file;
    std::string kind;
    double rate = 0.0;
    std::optional<int> n;
    bool asymptotic = false;
    std::string curve_out;
    int grid = 400;
};

inline Json cmd_exponent(const ExponentArgs& a, const Common& c, RunManifest& m) {
    const Input in = load(a.file);
    m.input_hash = fnv1a_hex(in.text);
    m.parameters = {{"kind", a.kind},
                    {"rate", a.rate},
                    {"n", a.n ? Json(*a.n) : Json(nullptr)},
                    {"asymptotic", a.asymptotic},
                    {"grid", a.grid}};
    const CQSource src = with_file(a.file, [&] { return source_from_json(in.json); });
    if (a.grid < 3) throw InvalidParameter("--grid must be >= 3");
    AlphaSearch search;
    search.grid_points = a.grid;
    const InformationProfile prof(src);
    const RateMode mode = a.asymptotic ? RateMode::kAsymptotic : RateMode::kFiniteN;
    const auto need_n = [&]() -> int {
        if (!a.n) throw InvalidParameter("--n is required for --kind " + a.kind);
        return *a.n;
    };
    ExponentReport rep;
    if (a.kind == "pa-direct") {
        rep = pa_achievability_exponent(prof, a.rate, need_n(), mode, search);
    } else if (a.kind == "pa-converse") {
        rep = pa_strong_converse_exponent(prof, a.rate, need_n(), mode, search);
    } else if (a.kind == "sc-direct") {
        rep = sc_achievability_exponent(prof, a.rate, search);
    } else if (a.kind == "sc-converse") {
        rep = sc_converse_exponent(prof, a.rate, a.n, search);
    } else if (a.kind == "dupuis") {
        rep = dupuis_exponent(prof, a.rate, search);
    } else if (a.kind == "iid") {
        rep = iid_exponent_via_types(src, a.rate, need_n(), {}, search);
    } else {
        throw InvalidParameter("unknown --kind " + a.kind);
    }
    Json r = exponent_to_json(rep, c.scale());
    r["units"] = c.units();
    r["rate"] = a.rate * c.scale();
    if (a.n) r["bound_at_n"] = rep.bound(*a.n);
    if (!a.curve_out.empty()) {
        std::ofstream csv(a.curve_out, std::ios::binary);
        if (!csv) throw InvalidInput("cannot write " + a.curve_out);
        csv << curve_to_csv(rep, c.scale());
        r["curve_file"] = a.curve_out;
    }
    return r;
}

struct SimulateArgs {
    std::string file;
    std::string task;
    std::optional<std::uint64_t> bins;
    std::optional<std::uint64_t> codewords;
    std::optional<int> n;
    std::vector<int> counts;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    bool exact = false;
};

inline Json cmd_simulate(const SimulateArgs& a, const Common& c, RunManifest& m) {
    const Input in = load(a.file);
    m.input_hash = fnv1a_hex(in.text);
    m.parameters = {{"task", a.task},
                    {"bins", a.bins ? Json(*a.bins) : Json(nullptr)},
                    {"M", a.codewords ? Json(*a.codewords) : Json(nullptr)},
                    {"n", a.n ? Json(*a.n) : Json(nullptr)},
                    {"counts", a.counts},
                    {"trials", a.trials},
                    {"exact", a.exact}};
    const CQSource src = with_file(a.file, [&] { return source_from_json(in.json); });
    const TypeDistribution t = pick_type(src.prior(), a.counts, a.n);
    const TypeClassEnsemble ens(ConstantTypeSource(src.states(), t));

    Json r;
    r["task"] = a.task;
    r["counts"] = t.counts();
    r["n"] = t.n();
    r["type_class_size"] = ens.size();
    const auto need = [&](const std::optional<std::uint64_t>& v, const char* flag) {
        if (!v) throw InvalidParameter(std::string(flag) + " is required for --task " + a.task);
        return *v;
    };
    const bool monte_carlo = !a.exact && a.task != "equivalence";
    if (monte_carlo) m.seed = a.seed;
    if (a.task == "pa") {
        const std::uint64_t bins = need(a.bins, "--bins");
        r["bins"] = bins;
        if (a.exact) {
            r["distance"] = {{"value", d_pa_exact(ens, bins)}};
        } else {
            r["distance"] = estimate_to_json(d_pa_monte_carlo(ens, bins, a.trials, a.seed, c.threads));
        }
    } else if (a.task == "sc") {
        const std::uint64_t mm = need(a.codewords, "--M");
        r["M"] = mm;
        if (a.exact) {
            r["distance"] = {{"value", d_sc_exact(ens, mm)}};
        } else {
            r["distance"] = estimate_to_json(d_sc_monte_carlo(ens, mm, a.trials, a.seed, c.threads));
        }
    } else if (a.task == "equivalence") {
        const std::uint64_t bins = need(a.bins, "--bins");
        const EquivalenceCheck eq = verify_equivalence(ens, bins);
        r["bins"] = bins;
        r["M"] = ens.size() / bins;
        r["d_pa"] = eq.d_pa;
        r["d_sc"] = eq.d_sc;
        r["gap"] = eq.gap;
    } else {
        throw InvalidParameter("unknown --task " + a.task);
    }
    return r;
}

struct WiretapArgs {
    std::string file;
    std::optional<double> rate;
    bool threshold = false;
    bool simulate = false;
    std::optional<int> n;
    double delta = 0.05;
    std::uint64_t trials = 200;
    std::uint64_t seed = 0;
    bool exact = false;
};

inline Json cmd_wiretap(const WiretapArgs& a, const Common& c, RunManifest& m) {
    const Input in = load(a.file);
    m.input_hash = fnv1a_hex(in.text);
    m.parameters = {{"rate", a.rate ? Json(*a.rate) : Json(nullptr)},
                    {"threshold", a.threshold},
                    {"simulate", a.simulate},
                    {"n", a.n ? Json(*a.n) : Json(nullptr)},
                    {"delta", a.delta},
                    {"trials", a.trials},
                    {"exact", a.exact}};
    const WiretapChannel ch = with_file(a.file, [&] { return channel_from_json(in.json); });
    const double s = c.scale();
    Json r;
    r["units"] = c.units();
    r["bob_mutual_information"] = holevo_mutual_info(ch.bob_source()) * s;
    r["eve_mutual_information"] = holevo_mutual_info(ch.eve_source()) * s;
    if (a.threshold) r["threshold"] = positivity_threshold(ch) * s;
    if (!a.rate && (a.simulate || !a.threshold)) {
        throw InvalidParameter("--rate is required unless only --threshold is requested");
    }
    if (a.rate) {
        const InformationProfile bob(ch.bob_source());
        const InformationProfile eve(ch.eve_source());
        r["rate"] = *a.rate * s;
        r["secrecy"] = exponent_to_json(secrecy_exponent(bob, eve, *a.rate), s);
    }
    if (a.simulate) {
        if (!a.n) throw InvalidParameter("--n is required with --simulate");
        const AllocationReport alloc = allocate_rates(ch, *a.rate, a.delta, *a.n);
        const TypeDistribution t = TypeDistribution::from_prior(ch.prior(), *a.n);
        const LeakageEstimate leak =
            simulate_leakage(ch, t, alloc.rates, a.trials, a.seed, a.exact, c.threads);
        if (!a.exact) m.seed = a.seed;
        r["allocation"] = {{"rate", alloc.rates.rate * s},
                           {"local_rate", alloc.rates.local_rate * s},
                           {"key_rate", alloc.rates.key_rate * s},
                           {"bob_decoding", exponent_to_json(alloc.bob_decoding, s)}};
        r["leakage"] = {{"exact", leak.exact},
                        {"messages", leak.messages},
                        {"local", leak.local},
                        {"keys", leak.keys},
                        {"realized_rate", leak.realized.rate * s},
                        {"realized_local_rate", leak.realized.local_rate * s},
                        {"realized_key_rate", leak.realized.key_rate * s},
                        {"direct", estimate_to_json(leak.direct)},
                        {"pa_message_key", estimate_to_json(leak.pa_message_key)},
                        {"pa_key", estimate_to_json(leak.pa_key)},
                        {"bound", estimate_to_json(leak.bound)},
                        {"max_excess", leak.max_excess}};
    }
    return r;
}

}  // namespace cli

/// Runs the `qpa` command line. args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"qpa: privacy amplification and soft covering against quantum side information"};
    app.require_subcommand(1);
    app.fallthrough();
    cli::Common common;
    app.add_flag("--bits", common.bits, "Display entropic quantities in bits (inputs stay in nats)");
    app.add_flag("--timing", common.timing, "Record wall time in the manifest");
    app.add_option("--threads", common.threads, "Worker threads for Monte Carlo trials")
        ->check(CLI::Range(1u, 256u));

    cli::InfoArgs info;
    auto* info_cmd = app.add_subcommand("info", "Entropies of a c-q source");
    info_cmd->add_option("source", info.file, "Source JSON file")->required();

    cli::AugustinArgs aug;
    auto* aug_cmd = app.add_subcommand("augustin", "Order-alpha Augustin information");
    aug_cmd->add_option("source", aug.file, "Source JSON file")->required();
    aug_cmd->add_option("--alpha", aug.alpha, "Order alpha")->required();
    aug_cmd->add_option("--tol", aug.tol, "Fixed-point tolerance")->capture_default_str();
    aug_cmd->add_option("--max-iter", aug.max_iter, "Iteration cap")->capture_default_str();
    aug_cmd->add_option("--variant", aug.variant, "sandwiched or petz")
        ->check(CLI::IsMember({"sandwiched", "petz"}))
        ->capture_default_str();

    cli::ExponentArgs ex;
    auto* ex_cmd = app.add_subcommand("exponent", "Error exponents");
    ex_cmd->add_option("source", ex.file, "Source JSON file")->required();
    ex_cmd->add_option("--kind", ex.kind, "Exponent kind")
        ->required()
        ->check(CLI::IsMember({"pa-direct", "pa-converse", "sc-direct", "sc-converse", "dupuis", "iid"}));
    ex_cmd->add_option("--rate", ex.rate, "Rate R in nats")->required();
    ex_cmd->add_option("--n", ex.n, "Blocklength");
    ex_cmd->add_flag("--asymptotic", ex.asymptotic, "Use H(p) in place of (1/n) log|T|");
    ex_cmd->add_option("--curve-out", ex.curve_out, "CSV file for the alpha curve");
    ex_cmd->add_option("--grid", ex.grid, "Alpha grid points")->capture_default_str();

    cli::SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Exact or sampled distinguishability");
    sim_cmd->add_option("source", sim.file, "Source JSON file")->required();
    sim_cmd->add_option("--task", sim.task, "pa, sc or equivalence")
        ->required()
        ->check(CLI::IsMember({"pa", "sc", "equivalence"}));
    sim_cmd->add_option("--bins", sim.bins, "Number of bins");
    sim_cmd->add_option("--M", sim.codewords, "Number of codewords");
    sim_cmd->add_option("--n", sim.n, "Blocklength (type taken from the prior)");
    sim_cmd->add_option("--counts", sim.counts, "Type as a count vector")->delimiter(',');
    sim_cmd->add_option("--trials", sim.trials, "Monte Carlo trials")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "Seed")->capture_default_str();
    sim_cmd->add_flag("--exact", sim.exact, "Enumerate instead of sampling");

    cli::WiretapArgs wt;
    auto* wt_cmd = app.add_subcommand("wiretap", "Wiretap secrecy exponent and leakage");
    wt_cmd->add_option("channel", wt.file, "Channel JSON file")->required();
    wt_cmd->add_option("--rate", wt.rate, "Message rate R in nats");
    wt_cmd->add_flag("--threshold", wt.threshold, "Report I(X:B) - I(X:E)");
    wt_cmd->add_flag("--simulate", wt.simulate, "Simulate leakage of the coded protocol");
    wt_cmd->add_option("--n", wt.n, "Blocklength");
    wt_cmd->add_option("--delta", wt.delta, "Rate back-off delta")->capture_default_str();
    wt_cmd->add_option("--trials", wt.trials, "Monte Carlo trials")->capture_default_str();
    wt_cmd->add_option("--seed", wt.seed, "Seed")->capture_default_str();
    wt_cmd->add_flag("--exact", wt.exact, "Enumerate every map f (|T| <= 8)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        RunManifest manifest;
        Json result;
        if (*info_cmd) {
            manifest.command = "info";
            result = cli::cmd_info(info, common, manifest);
        } else if (*aug_cmd) {
            manifest.command = "augustin";
            result = cli::cmd_augustin(aug, common, manifest);
        } else if (*ex_cmd) {
            manifest.command = "exponent";
            result = cli::cmd_exponent(ex, common, manifest);
        } else if (*sim_cmd) {
            manifest.command = "simulate";
            result = cli::cmd_simulate(sim, common, manifest);
        } else {
            manifest.command = "wiretap";
            result = cli::cmd_wiretap(wt, common, manifest);
        }
        manifest.parameters["bits"] = common.bits;
        manifest.parameters["threads"] = common.threads;
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (common.timing) manifest.wall_time_seconds = elapsed;
        Json doc;
        doc["manifest"] = manifest.to_json();
        doc["result"] = std::move(result);
        doc = round_numbers(doc);
        validate_output(doc);
        out << dump_json(doc) << '\n';
        return kExitOk;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

}  // namespace qpa

#endif
