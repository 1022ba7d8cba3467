// nsbox: analysis and simulation of no-signaling boxes from the command line.
//
// Subcommands: check, chsh, simulate, keyrate, monogamy. Every stochastic run
// takes an explicit --seed; repeated invocations with the same flags produce
// byte-identical output regardless of --workers or --kernel.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nsbox/box_io.hpp"
#include "nsbox/nscrypto.hpp"
#include "nsbox/polytope.hpp"
#include "nsbox/quantum.hpp"
#include "nsbox/sim.hpp"
#include "nsbox/tripartite.hpp"

namespace {

using nsbox::Json;

constexpr int kExitLocal = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitStatFail = 3;
constexpr int kExitNonlocal = 10;
constexpr int kExitSignaling = 20;

struct CheckArgs {
    std::string box_path;
    double tolerance = nsbox::kDefaultTol;
};

int run_check(const CheckArgs& args) {
    Json report;
    report["schema"] = 1;
    report["type"] = "check";
    report["file"] = args.box_path;

    nsbox::Correlation box = [&] {
        try {
            return nsbox::read_box_file(args.box_path);
        } catch (const nsbox::Error& e) {
            if (e.code() == nsbox::Errc::parse_error)
                throw;
            // Shape/normalization/negativity problems: structurally invalid box.
            report["verdict"] = "invalid";
            report["error"] = e.what();
            std::cout << report.dump(2) << "\n";
            std::exit(kExitInvalid);
        }
    }();

    report["mode"] = box.mode() == nsbox::NumericMode::rational ? "rational" : "float";
    const auto ns = nsbox::is_no_signaling(box, args.tolerance);
    report["no_signaling"] = ns.no_signaling;
    report["worst_marginal_deviation"] = ns.worst_deviation;
    if (!ns.no_signaling) {
        report["verdict"] = "signaling";
        std::cout << report.dump(2) << "\n";
        return kExitSignaling;
    }

    const nsbox::LocalityResult locality = nsbox::is_local(box);
    if (const auto* dec = std::get_if<nsbox::Decomposition>(&locality)) {
        report["verdict"] = "local";
        report["decomposition"] = nsbox::decomposition_to_json(*dec);
        std::cout << report.dump(2) << "\n";
        return kExitLocal;
    }
    const auto& cert = std::get<nsbox::NonlocalityCertificate>(locality);
    report["verdict"] = "nonlocal";
    report["certificate"] = nsbox::certificate_to_json(cert);
    std::cout << report.dump(2) << "\n";
    return kExitNonlocal;
}

struct ChshArgs {
    std::string box_path;
    std::optional<double> state_theta;
    std::string settings = "chsh-optimal";
    bool schmidt_convention = false;
};

nsbox::quantum::SettingFamily load_family(const std::string& settings) {
    if (!settings.empty() && settings.front() == '{') // inline JSON
        return nsbox::quantum::family_from_json(Json::parse(settings, nullptr, false));
    if (settings.size() > 5 && settings.ends_with(".json")) {
        std::ifstream in(settings);
        if (!in)
            nsbox::fail(nsbox::Errc::parse_error, "cannot open '" + settings + "'");
        Json j;
        in >> j;
        return nsbox::quantum::family_from_json(j);
    }
    return nsbox::quantum::named_family(settings);
}

int run_chsh(const ChshArgs& args) {
    double mark = 0.0;
    if (!args.box_path.empty()) {
        const nsbox::Correlation box = nsbox::read_box_file(args.box_path);
        mark = nsbox::evaluate_d(nsbox::chsh_functional(), box);
    } else if (args.state_theta) {
        nsbox::quantum::SchmidtState state;
        state.theta = *args.state_theta;
        state.singlet = !args.schmidt_convention;
        const auto result =
            nsbox::quantum::chsh_mark_for_settings(state, load_family(args.settings));
        mark = result.mark;
    } else {
        nsbox::fail(nsbox::Errc::parse_error, "chsh needs a box file or --state");
    }
    std::printf("%.12f\n", mark);
    return 0;
}

struct SimArgs {
    std::string model;
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    int pairs = 20;
    std::string settings_file;
    double sigma = 4.0;
    std::string transcript_path;
    int workers = 1;
    std::string kernel = "auto";
    int x = 0;
    int y = 0;
};

std::vector<nsbox::sim::DirectionPair> load_pairs(const SimArgs& args) {
    if (args.settings_file.empty())
        return nsbox::sim::random_direction_pairs(args.seed, args.pairs);
    std::ifstream in(args.settings_file);
    if (!in)
        nsbox::fail(nsbox::Errc::parse_error, "cannot open '" + args.settings_file + "'");
    Json j;
    in >> j;
    std::vector<nsbox::sim::DirectionPair> pairs;
    for (const auto& item : j) {
        const auto read_vec = [&](const char* key) {
            const auto& arr = item.at(key);
            return nsbox::quantum::make_direction(arr.at(0).get<double>(),
                                                  arr.at(1).get<double>(),
                                                  arr.at(2).get<double>())
                .v;
        };
        pairs.push_back({read_vec("a"), read_vec("b")});
    }
    if (pairs.empty())
        nsbox::fail(nsbox::Errc::parse_error, "settings file holds no direction pairs");
    return pairs;
}

void maybe_write_transcript(const std::string& path, const nsbox::sim::Transcript& t) {
    if (path.empty())
        return;
    std::ofstream out(path);
    if (!out)
        nsbox::fail(nsbox::Errc::parse_error, "cannot write '" + path + "'");
    nsbox::sim::write_transcript_jsonl(out, t);
}

int run_simulate(const SimArgs& args) {
    using nsbox::sim::Model;
    const Model model = nsbox::sim::model_from_name(args.model);
    nsbox::sim::RunOptions opts;
    opts.seed = args.seed;
    opts.workers = args.workers;
    opts.impl = nsbox::kernels::impl_from_name(args.kernel);
    opts.sigma = args.sigma;

    Json out;
    out["schema"] = 1;
    out["type"] = "simulation";
    out["model"] = args.model;
    out["seed"] = args.seed;
    out["rounds"] = args.rounds;
    out["kernel"] = nsbox::kernels::impl_name(nsbox::kernels::resolve(opts.impl));

    bool pass = false;
    switch (model) {
        case Model::coin_game: {
            const auto result = nsbox::sim::coin_game(args.rounds, opts);
            out["pattern_violations"] = result.counts.pattern_violations;
            out["empirical_mark"] = result.empirical_mark;
            out["mark_stderr"] = result.mark_stderr;
            out["marginals"] = nsbox::stats::report_to_json(result.report);
            pass = result.pattern_ok && result.report.pass &&
                   std::abs(result.empirical_mark - 4.0) <=
                       args.sigma * std::max(result.mark_stderr, 1e-12);
            maybe_write_transcript(args.transcript_path,
                                   nsbox::sim::bit_model_transcript(Model::coin_game,
                                                                    args.rounds, args.seed));
            break;
        }
        case Model::exam1: {
            const auto result = nsbox::sim::exam1_guess_game(args.rounds, opts);
            out["success_frequency"] = result.success_frequency;
            out["report"] = nsbox::stats::report_to_json(result.report);
            pass = result.report.pass;
            maybe_write_transcript(args.transcript_path,
                                   nsbox::sim::bit_model_transcript(Model::exam1,
                                                                    args.rounds, args.seed));
            break;
        }
        case Model::pr_box: {
            const auto result = nsbox::sim::estimate_pr_box(args.rounds, opts);
            out["report"] = nsbox::stats::report_to_json(result.report);
            out["resources"] = {{"bits_communicated", result.totals.bits_communicated},
                                {"prbox_uses", result.totals.prbox_uses}};
            pass = result.report.pass;
            maybe_write_transcript(
                args.transcript_path,
                nsbox::sim::bit_model_transcript(Model::pr_box, args.rounds, args.seed,
                                                 args.x, args.y));
            break;
        }
        case Model::toner_bacon:
        case Model::prbox_singlet: {
            const auto pairs = load_pairs(args);
            const auto oracle = [](const nsbox::Vec3& a, const nsbox::Vec3& b) {
                return nsbox::quantum::singlet_correlation(nsbox::quantum::make_direction(a),
                                                           nsbox::quantum::make_direction(b));
            };
            const auto result = nsbox::sim::estimate_directions(model, pairs, args.rounds,
                                                                opts, oracle);
            out["pairs"] = pairs.size();
            out["report"] = nsbox::stats::report_to_json(result.report);
            out["resources"] = {{"bits_communicated", result.totals.bits_communicated},
                                {"prbox_uses", result.totals.prbox_uses}};
            pass = result.report.pass;
            if (!args.transcript_path.empty())
                maybe_write_transcript(args.transcript_path,
                                       nsbox::sim::entanglement_transcript(
                                           model, pairs.front(), args.rounds, args.seed));
            break;
        }
        case Model::local_baseline: {
            const auto result = nsbox::sim::local_baseline(args.rounds, opts);
            out["empirical_mark"] = result.empirical_mark;
            out["mark_stderr"] = result.mark_stderr;
            pass = result.empirical_mark <= 3.0 + args.sigma * result.mark_stderr;
            break;
        }
    }
    out["pass"] = pass;
    std::cout << out.dump(2) << "\n";
    return pass ? 0 : kExitStatFail;
}

struct KeyrateArgs {
    std::string pmin = "0";
    std::string pmax = "1";
    int steps = 101;
    std::string out_path;
};

int run_keyrate(const KeyrateArgs& args) {
    const nsbox::Rational pmin = nsbox::rat_from_string(args.pmin);
    const nsbox::Rational pmax = nsbox::rat_from_string(args.pmax);
    if (pmin < 0 || pmax > 1 || pmin >= pmax)
        nsbox::fail(nsbox::Errc::range_error, "need 0 <= pmin < pmax <= 1");
    if (args.steps < 2)
        nsbox::fail(nsbox::Errc::range_error, "need at least 2 steps");

    std::vector<nsbox::Rational> grid;
    const nsbox::Rational step = (pmax - pmin) / (args.steps - 1);
    for (int i = 0; i < args.steps; ++i)
        grid.push_back(pmin + step * i);

    nsbox::crypto::KeyAdvantageCurve curve = nsbox::crypto::key_advantage_curve(grid);
    curve.crossing = nsbox::crypto::advantage_crossing(nsbox::rat_to_double(pmin),
                                                       nsbox::rat_to_double(pmax));

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!args.out_path.empty()) {
        file.open(args.out_path);
        if (!file)
            nsbox::fail(nsbox::Errc::parse_error, "cannot write '" + args.out_path + "'");
        out = &file;
    }
    nsbox::crypto::curve_to_csv(*out, curve);
    if (curve.crossing)
        *out << "crossing=" << std::setprecision(8) << *curve.crossing << "\n";
    else
        *out << "crossing=none-in-range\n";
    return 0;
}

struct MonogamyArgs {
    std::string grid = "0.5";
    std::string min = "2";
    std::string max = "4";
};

int run_monogamy(const MonogamyArgs& args) {
    const nsbox::Rational step = nsbox::rat_from_string(args.grid);
    const nsbox::Rational lo = nsbox::rat_from_string(args.min);
    const nsbox::Rational hi = nsbox::rat_from_string(args.max);
    if (step <= 0 || step > 1)
        nsbox::fail(nsbox::Errc::range_error, "grid step must lie in (0, 1]");
    if (lo > hi || hi > 4)
        nsbox::fail(nsbox::Errc::range_error, "need min <= max <= 4");

    std::cout << "m_ab,max_m_ac,m_ab_exact,max_m_ac_exact\n";
    for (nsbox::Rational m = lo; m <= hi; m += step) {
        const nsbox::MonogamyResult r = nsbox::monogamy_max(m);
        std::printf("%.6f,%.6f,%s,%s\n", nsbox::rat_to_double(m),
                    nsbox::rat_to_double(r.max_m_ac), nsbox::rat_to_string(m).c_str(),
                    nsbox::rat_to_string(r.max_m_ac).c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"no-signaling box toolkit"};
    app.require_subcommand(1);

    CheckArgs check_args;
    auto* check = app.add_subcommand(
        "check", "validate a box file and classify it (local / nonlocal / signaling)");
    check->add_option("box", check_args.box_path, "box JSON file")->required();
    check->add_option("--tolerance", check_args.tolerance, "float-mode tolerance");

    ChshArgs chsh_args;
    auto* chsh = app.add_subcommand("chsh", "CHSH mark of a box or a quantum state");
    chsh->add_option("box", chsh_args.box_path, "box JSON file");
    double theta = 0.0;
    auto* theta_opt = chsh->add_option("--state", theta, "Schmidt angle (radians)");
    chsh->add_option("--settings", chsh_args.settings,
                     "family name (chsh-optimal|chsh-protocol|bb84) or JSON file");
    chsh->add_flag("--schmidt-convention", chsh_args.schmidt_convention,
                   "use the correlated cos|00>+sin|11> frame instead of the singlet one");

    SimArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo runs");
    simulate
        ->add_option("--model", sim_args.model,
                     "coin-game|toner-bacon|prbox-singlet|pr-box|exam1|local-baseline")
        ->required();
    simulate->add_option("--rounds", sim_args.rounds, "rounds (per setting where relevant)")
        ->required();
    simulate->add_option("--seed", sim_args.seed, "master seed")->required();
    simulate->add_option("--pairs", sim_args.pairs, "random direction pairs (default 20)");
    simulate->add_option("--settings", sim_args.settings_file,
                         "JSON file with [{\"a\":[x,y,z],\"b\":[x,y,z]}, ...]");
    simulate->add_option("--sigma", sim_args.sigma, "z-score pass threshold (default 4)");
    simulate->add_option("--transcript", sim_args.transcript_path, "JSONL transcript path");
    simulate->add_option("--workers", sim_args.workers, "worker threads (default 1)");
    simulate->add_option("--kernel", sim_args.kernel, "auto|scalar|avx2");
    simulate->add_option("--x", sim_args.x, "pr-box transcript input x");
    simulate->add_option("--y", sim_args.y, "pr-box transcript input y");

    KeyrateArgs key_args;
    auto* keyrate = app.add_subcommand("keyrate", "isotropic-family key advantage curve");
    keyrate->add_option("--pmin", key_args.pmin, "lower p (default 0)");
    keyrate->add_option("--pmax", key_args.pmax, "upper p (default 1)");
    keyrate->add_option("--steps", key_args.steps, "grid points (default 101)");
    keyrate->add_option("--out", key_args.out_path, "write CSV here instead of stdout");

    MonogamyArgs mono_args;
    auto* monogamy = app.add_subcommand("monogamy", "CHSH monogamy trade-off table");
    monogamy->add_option("--grid", mono_args.grid, "step for m_ab (default 0.5)");
    monogamy->add_option("--min", mono_args.min, "lowest m_ab (default 2)");
    monogamy->add_option("--max", mono_args.max, "highest m_ab (default 4)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed())
            return run_check(check_args);
        if (chsh->parsed()) {
            if (theta_opt->count() > 0)
                chsh_args.state_theta = theta;
            return run_chsh(chsh_args);
        }
        if (simulate->parsed())
            return run_simulate(sim_args);
        if (keyrate->parsed())
            return run_keyrate(key_args);
        if (monogamy->parsed())
            return run_monogamy(mono_args);
    } catch (const nsbox::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
