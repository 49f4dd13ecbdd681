#include "drs/report.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace drs {

namespace {

double finite_number(const json& j, const char* what) {
    if (!j.is_number()) {
        throw ContractError(std::string(what) + ": expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ContractError(std::string(what) + ": numbers must be finite");
    }
    return v;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const Matrix& m) {
    json out = json::array();
    for (const auto& row : m.to_rows()) {
        out.push_back(row);
    }
    return out;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) {
        throw DimensionError("matrix literal must be a non-empty array of arrays");
    }
    std::vector<std::vector<double>> rows;
    for (const auto& row : j) {
        if (!row.is_array()) {
            throw DimensionError("matrix literal rows must be arrays");
        }
        std::vector<double> r;
        for (const auto& v : row) {
            r.push_back(finite_number(v, "matrix literal"));
        }
        rows.push_back(std::move(r));
    }
    return Matrix::from_rows(rows);
}

std::vector<double> vector_from_json(const json& j) {
    if (!j.is_array() || j.empty()) {
        throw DimensionError("vector literal must be a non-empty array");
    }
    std::vector<double> out;
    for (const auto& v : j) {
        out.push_back(finite_number(v, "vector literal"));
    }
    return out;
}

json to_json(const DiagonalMatrix& d) { return json(d.values()); }

json to_json(const RiccatiCertificate& cert) {
    return json{{"P", to_json(cert.P)}, {"Q", to_json(cert.Q)}, {"margin", cert.margin}};
}

json to_json(const Verdict& v) {
    json out;
    out["status"] = to_string(v.status());
    if (const auto* cert = v.certificate()) {
        out["P"] = to_json(cert->P);
        out["Q"] = to_json(cert->Q);
        out["margin"] = cert->margin;
    } else if (const auto* w = v.witness()) {
        out["witness_S"] = to_json(w->S.full());
        out["failing_subset"] = w->p_report.failing_subset;
        out["failing_minor"] = w->p_report.failing_minor;
        out["witness_min_eigenvalue"] = w->min_eigenvalue;
    } else {
        out["best_margin"] = finite_or_null(std::get<Undecided>(v.outcome).best_margin);
    }
    out["samples_tried"] = v.samples_tried;
    return out;
}

json to_json(const ClassVerdict& v) {
    json out;
    out["tag"] = to_string(v.tag.kind);
    out["a_family"] = to_string(v.tag.a_family);
    if (v.tag.k) {
        out["k"] = *v.tag.k;
    }
    json params;
    params["a"] = v.tag.a;
    if (!v.tag.b.empty()) {
        params["b"] = v.tag.b;
    }
    if (!v.tag.c.empty()) {
        params["c"] = v.tag.c;
    }
    if (!v.tag.l.empty()) {
        params["l"] = v.tag.l;
        params["u"] = v.tag.u;
    }
    out["parameters"] = std::move(params);
    out["stable"] = to_string(v.stable);
    json cond = json::object();
    for (const auto& [name, value] : v.conditions) {
        cond[name] = value;
    }
    out["conditions"] = std::move(cond);
    if (v.D) {
        out["D"] = to_json(*v.D);
    }
    if (v.E) {
        out["E"] = to_json(*v.E);
    }
    return out;
}

json to_json(const DecayReport& r) {
    return json{{"tau", r.tau},
                {"h", r.h},
                {"final_norm", finite_or_null(r.final_norm)},
                {"initial_lk", r.initial_lk},
                {"max_lk_increase", finite_or_null(r.max_lk_increase)},
                {"diverged", r.diverged},
                {"decayed", r.decayed}};
}

ProblemFile problem_from_json(const json& j) {
    if (!j.is_object()) {
        throw ContractError("problem file must be a JSON object");
    }
    static const char* const kKnown[] = {"A", "B", "tau", "options", "D", "E", "S", "P", "Q"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
            throw ContractError("problem file: unknown field '" + key + "'");
        }
    }
    if (!j.contains("A") || !j.contains("B")) {
        throw ContractError("problem file: fields A and B are required");
    }
    ProblemFile p(MatrixPair(matrix_from_json(j.at("A")), matrix_from_json(j.at("B"))));
    if (j.contains("tau")) {
        const json& t = j.at("tau");
        p.taus = t.is_array() ? vector_from_json(t) : std::vector<double>{finite_number(t, "tau")};
    }
    if (j.contains("options")) {
        const json& o = j.at("options");
        if (!o.is_object()) {
            throw ContractError("problem file: options must be an object");
        }
        for (const auto& [key, value] : o.items()) {
            if (key == "tol") {
                p.options.tol = finite_number(value, "options.tol");
            } else if (key == "seed") {
                p.options.seed = value.get<std::uint64_t>();
            } else if (key == "samples") {
                p.options.samples = value.get<std::size_t>();
            } else if (key == "max_iter") {
                p.options.max_iter = value.get<std::size_t>();
            } else if (key == "horizon") {
                p.horizon = finite_number(value, "options.horizon");
            } else if (key == "step") {
                p.step = finite_number(value, "options.step");
            } else {
                throw ContractError("problem file: unknown option '" + key + "'");
            }
        }
    }
    if (j.contains("D")) {
        p.D = vector_from_json(j.at("D"));
    }
    if (j.contains("E")) {
        p.E = vector_from_json(j.at("E"));
    }
    if (j.contains("S")) {
        p.S = matrix_from_json(j.at("S"));
    }
    if (j.contains("P")) {
        p.P = vector_from_json(j.at("P"));
    }
    if (j.contains("Q")) {
        p.Q = vector_from_json(j.at("Q"));
    }
    return p;
}

}  // namespace drs
