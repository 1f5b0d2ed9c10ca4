#include "loewner/verdict.hpp"

namespace loewner {

const Matrix& Witness::matrix(const std::string& name) const {
    for (const auto& [key, m] : matrices)
        if (key == name) return m;
    throw DomainError("witness has no matrix named '" + name + "'");
}

double Witness::scalar(const std::string& name) const {
    for (const auto& [key, v] : scalars)
        if (key == name) return v;
    throw DomainError("witness has no scalar named '" + name + "'");
}

bool Witness::has_matrix(const std::string& name) const {
    for (const auto& [key, m] : matrices)
        if (key == name) return true;
    return false;
}

const char* to_string(Verdict::Status s) {
    switch (s) {
    case Verdict::Status::Holds: return "holds-within-budget";
    case Verdict::Status::Violated: return "violated";
    case Verdict::Status::DomainErr: return "domain-error";
    }
    return "unknown";
}

} // namespace loewner
