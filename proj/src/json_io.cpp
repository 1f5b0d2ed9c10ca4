#include "loewner/json_io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

namespace loewner {

SymMatrix matrix_from_json(const ojson& j, const std::string& what) {
    if (!j.is_object() || !j.contains("n") || !j.contains("data"))
        throw DomainError(what + ": expected an object with \"n\" and \"data\"");
    int n = j.at("n").get<int>();
    if (n < 1 || n > Tol::max_dim)
        throw DomainError(what + ": dimension out of range");
    const auto& data = j.at("data");
    if (!data.is_array() || int(data.size()) != n)
        throw DomainError(what + ": \"data\" must hold " + std::to_string(n) + " rows");

    Matrix raw(n);
    for (int i = 0; i < n; ++i) {
        const auto& row = data.at(std::size_t(i));
        if (!row.is_array() || int(row.size()) != n)
            throw DomainError(what + ": row " + std::to_string(i) + " must hold " +
                              std::to_string(n) + " entries");
        for (int k = 0; k < n; ++k) {
            double v = row.at(std::size_t(k)).get<double>();
            if (!std::isfinite(v))
                throw DomainError(what + ": non-finite entry");
            raw.at(i, k) = v;
        }
    }

    double asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            asym = std::max(asym, std::fabs(raw.at(i, k) - raw.at(k, i)));
    if (asym > 1e-9)
        std::cerr << "warning: " << what << " asymmetry " << asym
                  << " exceeds 1e-9; symmetrizing as (M + M^T)/2\n";
    return SymMatrix::symmetrized(raw);
}

SymMatrix load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open matrix file: " + path);
    ojson j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DomainError("malformed JSON in " + path + ": " + e.what());
    }
    return matrix_from_json(j, path);
}

ojson matrix_to_json(const Matrix& m) {
    ojson j;
    j["n"] = m.dim();
    ojson rows = ojson::array();
    for (int i = 0; i < m.dim(); ++i) {
        ojson row = ojson::array();
        for (int k = 0; k < m.dim(); ++k) row.push_back(m.at(i, k));
        rows.push_back(std::move(row));
    }
    j["data"] = std::move(rows);
    return j;
}

State load_state_file(const std::string& path) {
    return State::density(load_matrix_file(path));
}

ojson witness_to_json(const Witness& w) {
    ojson j;
    j["property"] = w.property_id;
    j["trial_index"] = w.trial_index;
    j["margin"] = w.margin;
    j["fn"] = w.fn_text;
    if (!w.matrices.empty()) {
        ojson mats;
        for (const auto& [name, m] : w.matrices) mats[name] = matrix_to_json(m);
        j["matrices"] = std::move(mats);
    }
    if (!w.scalars.empty()) {
        ojson sc;
        for (const auto& [name, v] : w.scalars) sc[name] = v;
        j["scalars"] = std::move(sc);
    }
    if (!w.nodes.empty()) j["nodes"] = w.nodes;
    if (!w.xi.empty()) j["xi"] = w.xi;
    return j;
}

ojson verdict_to_json(const Verdict& v) {
    ojson j;
    j["status"] = to_string(v.status);
    j["trials_run"] = v.trials_run;
    j["min_margin"] = v.min_margin;
    if (v.witness) j["witness"] = witness_to_json(*v.witness);
    else j["witness"] = nullptr;
    if (v.status == Verdict::Status::DomainErr) {
        j["error"] = v.error;
        j["error_trial"] = v.error_trial;
    }
    return j;
}

ojson chain_report_to_json(const ChainReport& r) {
    ojson j;
    j["concave_n_plus_1"] = verdict_to_json(r.concave_next);
    j["hansen_pedersen_n"] = verdict_to_json(r.hansen_pedersen);
    j["companion_monotone_n"] = verdict_to_json(r.companion_monotone);
    j["concave_half_n"] = verdict_to_json(r.concave_half);
    j["inconsistencies"] = r.inconsistencies;
    return j;
}

ojson fixture_report_to_json(const FixtureReport& r) {
    ojson j;
    ojson items = ojson::array();
    for (const auto& res : r.results) {
        ojson it;
        it["name"] = res.name;
        it["matches_expected"] = res.matches_expected;
        it["detail"] = res.detail;
        items.push_back(std::move(it));
    }
    j["fixtures"] = std::move(items);
    j["dual_reading_note"] = r.dual_reading_note;
    j["all_expected"] = r.all_expected();
    return j;
}

ojson inf_estimate_to_json(const InfEstimate& e) {
    ojson j;
    j["value"] = e.value;
    j["argmin"] = {{"lambda", e.arg_lambda}, {"mu", e.arg_mu}};
    j["grid_size"] = e.grid_size;
    j["range"] = {e.range.lo, e.range.hi};
    return j;
}

} // namespace loewner
