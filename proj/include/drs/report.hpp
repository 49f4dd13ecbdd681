#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "drs/classes.hpp"
#include "drs/ddesim.hpp"
#include "drs/riccati.hpp"

namespace drs {

using json = nlohmann::ordered_json;

/// Matrix literal: array of equal-length arrays of finite numbers.
json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
std::vector<double> vector_from_json(const json& j);

json to_json(const DiagonalMatrix& d);
json to_json(const RiccatiCertificate& cert);

/// {status, P?, Q?, margin?, witness_S?, failing_subset?, failing_minor?, best_margin?, samples_tried}
json to_json(const Verdict& v);

/// {tag, a_family, k?, parameters, stable, conditions{name: slack}, D?, E?}
json to_json(const ClassVerdict& v);

json to_json(const DecayReport& r);

/// Input problem: {"A": [[...]], "B": [[...]], "tau"?: [...], "options"?: {...},
/// "D"?: [...], "E"?: [...], "S"?: [[...]], "P"?: [...], "Q"?: [...]}.
struct ProblemFile {
    explicit ProblemFile(MatrixPair p) : pair(std::move(p)) {}

    MatrixPair pair;
    std::vector<double> taus;
    SolverOptions options;
    double horizon = 200.0;
    double step = 0.01;
    std::optional<std::vector<double>> D;
    std::optional<std::vector<double>> E;
    std::optional<Matrix> S;
    std::optional<std::vector<double>> P;
    std::optional<std::vector<double>> Q;
};

/// Throws drs::Error (or a subclass) on malformed input.
ProblemFile problem_from_json(const json& j);

}  // namespace drs
