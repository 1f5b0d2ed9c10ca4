#pragma once

#include <string>

#include <json.hpp>

#include "loewner/matrix.hpp"
#include "loewner/monotone.hpp"
#include "loewner/psineq.hpp"
#include "loewner/verdict.hpp"

namespace loewner {

using ojson = nlohmann::ordered_json;

// Matrix file format: {"n": <int>, "data": [[row], [row], ...]}. Symmetry is
// enforced by averaging (M + M^T)/2; a warning goes to stderr when the raw
// asymmetry exceeds 1e-9.
SymMatrix matrix_from_json(const ojson& j, const std::string& what = "matrix");
SymMatrix load_matrix_file(const std::string& path);
ojson matrix_to_json(const Matrix& m);

// State files reuse the matrix format; the weight must be PSD with unit trace.
State load_state_file(const std::string& path);

ojson witness_to_json(const Witness& w);
ojson verdict_to_json(const Verdict& v);
ojson chain_report_to_json(const ChainReport& r);
ojson fixture_report_to_json(const FixtureReport& r);
ojson inf_estimate_to_json(const InfEstimate& e);

} // namespace loewner
