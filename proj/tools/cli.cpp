#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "drs/acceptance.hpp"
#include "drs/report.hpp"
#include "drs/transforms.hpp"

namespace drs::cli {

namespace {

struct Flags {
    std::string command;
    std::string problem_path;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> max_iter;
    std::optional<std::string> tau;
    std::optional<double> horizon;
    std::optional<double> step;
    std::string format = "json";
    std::string out_path;
};

struct Outcome {
    std::string body;
    int code = kDefinitive;
};

std::vector<double> parse_tau_list(const std::string& text) {
    std::vector<double> taus;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(v)) {
            throw ContractError("--tau: '" + item + "' is not a finite number");
        }
        taus.push_back(v);
    }
    if (taus.empty()) {
        throw ContractError("--tau: empty list");
    }
    return taus;
}

ProblemFile load_problem(const Flags& f) {
    if (f.problem_path.empty()) {
        throw ContractError(f.command + ": a problem file is required");
    }
    json j;
    try {
        if (f.problem_path == "-") {
            j = json::parse(std::cin);
        } else {
            std::ifstream in(f.problem_path);
            if (!in) {
                throw ContractError("cannot open '" + f.problem_path + "'");
            }
            j = json::parse(in);
        }
    } catch (const json::parse_error& e) {
        throw ContractError(std::string("malformed JSON: ") + e.what());
    }
    ProblemFile p = problem_from_json(j);
    if (f.tol) p.options.tol = *f.tol;
    if (f.seed) p.options.seed = *f.seed;
    if (f.samples) p.options.samples = *f.samples;
    if (f.max_iter) p.options.max_iter = *f.max_iter;
    if (f.horizon) p.horizon = *f.horizon;
    if (f.step) p.step = *f.step;
    if (f.tau) p.taus = parse_tau_list(*f.tau);
    return p;
}

int verdict_code(VerdictStatus s) { return s == VerdictStatus::Unknown ? kUndecided : kDefinitive; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Outcome cmd_check(const ProblemFile& p) {
    const Verdict v = solve_diagonal(p.pair, p.options);
    return {dump(to_json(v)), verdict_code(v.status())};
}

Outcome cmd_classify(const ProblemFile& p) {
    if (auto cv = evaluate_class(p.pair)) {
        return {dump(to_json(*cv)), cv->stable == Stability::Marginal ? kUndecided : kDefinitive};
    }
    const Verdict v = solve_diagonal(p.pair, p.options);
    json out;
    out["tag"] = to_string(ClassKind::Unstructured);
    out["fallback"] = to_json(v);
    return {dump(out), verdict_code(v.status())};
}

Outcome cmd_refute(const ProblemFile& p) {
    std::size_t tried = 0;
    const auto w = refute_by_sampling(p.pair, p.options.samples, p.options.seed, p.options.psd_tol, &tried);
    json out;
    if (w) {
        out["witness_S"] = to_json(w->S.full());
        out["failing_subset"] = w->p_report.failing_subset;
        out["failing_minor"] = w->p_report.failing_minor;
        out["witness_min_eigenvalue"] = w->min_eigenvalue;
    } else {
        out["witness_S"] = nullptr;
    }
    out["samples_tried"] = tried;
    return {dump(out), w ? kDefinitive : kUndecided};
}

// Certificate from the problem file when given, otherwise from the solver.
std::optional<RiccatiCertificate> obtain_certificate(const ProblemFile& p, json& note) {
    if (p.P || p.Q) {
        if (!p.P || !p.Q) {
            throw ContractError("P and Q must be given together");
        }
        note = "problem file";
        return make_certificate(p.pair, DiagonalMatrix(*p.P), DiagonalMatrix(*p.Q));
    }
    const Verdict v = solve_diagonal(p.pair, p.options);
    note = to_string(v.status());
    if (const auto* cert = v.certificate()) {
        return *cert;
    }
    return std::nullopt;
}

Outcome cmd_transform(const ProblemFile& p) {
    json out;
    if (p.S) {
        if (p.D || p.E) {
            throw ContractError("transform: give either S or D and E, not both");
        }
        const MatrixPair image = hadamard_congruence(p.pair, BlockSymmetric(*p.S), p.options.psd_tol);
        const Verdict v = solve_diagonal(image, p.options);
        out["transform"] = "hadamard";
        out["A"] = to_json(image.A);
        out["B"] = to_json(image.B);
        out["verdict"] = to_json(v);
        return {dump(out), verdict_code(v.status())};
    }
    if (!p.D || !p.E) {
        throw ContractError("transform: problem file needs D and E, or S");
    }
    const DadTransform t = dad_transform(p.pair, ScalingPair{DiagonalMatrix(*p.D), DiagonalMatrix(*p.E)});
    out["transform"] = "dad";
    out["A"] = to_json(t.pair().A);
    out["B"] = to_json(t.pair().B);
    json source;
    const auto cert = obtain_certificate(p, source);
    out["source_certificate"] = source;
    if (!cert) {
        out["certificate"] = nullptr;
        return {dump(out), kUndecided};
    }
    out["certificate"] = to_json(t.map(*cert));
    return {dump(out), kDefinitive};
}

Outcome cmd_simulate(const ProblemFile& p, const Flags& f) {
    if (p.taus.empty()) {
        throw ContractError("simulate: no delays given (tau in the problem file or --tau)");
    }
    json source;
    const auto cert = obtain_certificate(p, source);
    const std::size_t n = p.pair.n();
    // Without a certificate V is evaluated with P = Q = I and carries no guarantee.
    const RiccatiCertificate used =
        cert ? *cert
             : RiccatiCertificate{DiagonalMatrix(std::vector<double>(n, 1.0)),
                                  DiagonalMatrix(std::vector<double>(n, 1.0)), 0.0};
    const std::vector<double> phi(n, 1.0);
    const int code = cert ? kDefinitive : kUndecided;

    if (f.format == "csv") {
        if (p.taus.size() != 1) {
            throw ContractError("simulate: --format csv needs exactly one delay");
        }
        const DelayTrajectory traj = simulate(p.pair, p.taus.front(), phi, p.horizon, p.step);
        std::ostringstream os;
        write_trajectory_csv(os, traj, lk_functional(traj, used));
        return {os.str(), code};
    }
    json out;
    out["certificate_source"] = source;
    out["certified"] = cert.has_value();
    out["horizon"] = p.horizon;
    out["step"] = p.step;
    out["P"] = to_json(used.P);
    out["Q"] = to_json(used.Q);
    json reports = json::array();
    for (const DecayReport& r : decay_check(p.pair, used, p.taus, p.horizon, p.step)) {
        reports.push_back(to_json(r));
    }
    out["decay"] = std::move(reports);
    return {dump(out), code};
}

Outcome cmd_selftest(const Flags& f, std::ostream& err) {
    AcceptanceOptions opt;
    if (f.seed) {
        opt.seed = *f.seed;
    }
    auto results = run_acceptance(opt);
    const json first = acceptance_report(results);
    const json second = acceptance_report(run_acceptance(opt));
    results.push_back(determinism_criterion(first, second));
    const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
    json out;
    out["seed"] = opt.seed;
    out["passed"] = all;
    out["criteria"] = acceptance_report(results);
    if (!all) {
        err << "drs: selftest failed\n";
    }
    return {dump(out), all ? kDefinitive : kInputError};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags f;
    CLI::App app{"Diagonal Riccati stability of delay pairs (A, B)", "drs"};
    app.add_option("command", f.command, "check | classify | refute | transform | simulate | selftest")
        ->required()
        ->check(CLI::IsMember({"check", "classify", "refute", "transform", "simulate", "selftest"}));
    app.add_option("problem", f.problem_path, "problem JSON file, or - for stdin");
    app.add_option("--tol", f.tol, "required certificate margin");
    app.add_option("--seed", f.seed, "random seed");
    app.add_option("--samples", f.samples, "random correlation samples for the refuter");
    app.add_option("--max-iter", f.max_iter, "optimizer iterations per start");
    app.add_option("--tau", f.tau, "comma-separated delays");
    app.add_option("--horizon", f.horizon, "simulation horizon");
    app.add_option("--step", f.step, "integration step");
    app.add_option("--format", f.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", f.out_path, "write the report to this file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kDefinitive;
    } catch (const CLI::ParseError& e) {
        err << "drs: " << e.what() << "\n";
        return kInputError;
    }

    Outcome result;
    try {
        if (f.format == "csv" && f.command != "simulate") {
            throw ContractError("--format csv applies to simulate only");
        }
        if (f.command == "selftest") {
            result = cmd_selftest(f, err);
        } else {
            const ProblemFile p = load_problem(f);
            if (f.command == "check") {
                result = cmd_check(p);
            } else if (f.command == "classify") {
                result = cmd_classify(p);
            } else if (f.command == "refute") {
                result = cmd_refute(p);
            } else if (f.command == "transform") {
                result = cmd_transform(p);
            } else {
                result = cmd_simulate(p, f);
            }
        }
    } catch (const Error& e) {
        err << "drs: " << e.what() << "\n";
        return kInputError;
    } catch (const json::exception& e) {
        err << "drs: " << e.what() << "\n";
        return kInputError;
    }

    if (f.out_path.empty()) {
        out << result.body;
    } else {
        std::ofstream file(f.out_path);
        if (!file) {
            err << "drs: cannot write '" << f.out_path << "'\n";
            return kInputError;
        }
        file << result.body;
    }
    return result.code;
}

}  // namespace drs::cli
