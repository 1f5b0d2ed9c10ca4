#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loewner/matrix.hpp"

namespace loewner {

// Everything needed to replay a violation without the RNG: the function
// text, the exact matrices/scalars/nodes, and the margin that was observed.
struct Witness {
    std::string property_id;
    long trial_index = -1;
    double margin = 0.0;
    std::string fn_text;
    std::vector<std::pair<std::string, Matrix>> matrices;
    std::vector<std::pair<std::string, double>> scalars;
    std::vector<double> nodes; // Loewner grid nodes
    std::vector<double> xi;    // extracted state vector (counterexample search)

    const Matrix& matrix(const std::string& name) const;
    double scalar(const std::string& name) const;
    bool has_matrix(const std::string& name) const;
};

struct Verdict {
    enum class Status { Holds, Violated, DomainErr };

    Status status = Status::Holds;
    long trials_run = 0;
    double min_margin = 0.0; // smallest margin over non-erroring trials
    std::optional<Witness> witness;
    std::string error;       // domain-error detail, offending point included
    long error_trial = -1;

    bool holds() const { return status == Status::Holds; }
    bool violated() const { return status == Status::Violated; }
};

const char* to_string(Verdict::Status s);

} // namespace loewner
