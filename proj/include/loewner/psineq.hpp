#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "loewner/expr.hpp"
#include "loewner/matrix.hpp"
#include "loewner/monotone.hpp"
#include "loewner/verdict.hpp"

namespace loewner {

// The required order 0 < A <= B does not hold.
struct OrderError : DomainError {
    using DomainError::DomainError;
};

// g is not strictly increasing on the sampled range (trace-condition grid).
struct NotIncreasingError : DomainError {
    using DomainError::DomainError;
};

// Margin of the two-sided inequality
//   phi(A) + phi(B) - phi(|A-B|) <= 2 phi(f(A)^{1/2} g(B) f(A)^{1/2}),
// returned as rhs - lhs; negative means violated.
double ps_margin(const ScalarFunction& fn_f, const State& state,
                 const SymMatrix& a, const SymMatrix& b, double clamp = Tol::clamp);

// Margin of the ordered special case phi(A) <= phi(f(A)^{1/2} g(B) f(A)^{1/2}),
// requiring 0 < A <= B; throws OrderError otherwise.
double ps_margin_ordered(const ScalarFunction& fn_f, const State& state,
                         const SymMatrix& a, const SymMatrix& b, double clamp = Tol::clamp);

struct PsCheckConfig {
    ScalarFunction fn_f;
    int dim = 4;
    long trials = 1000;
    State state = State::canonical_trace();
    bool ordered_only = false;
    bool inject_fixture = false; // the 2x2 example pair, padded, at trial 0
    std::uint64_t seed = 0;
    DomainInterval domain;
    int jobs = 1;
    double clamp = Tol::clamp;
    double psd_rel = Tol::psd_rel;
};

Verdict check_ps(const PsCheckConfig& config);

// phi(f(A)^{1/2} dg(A + tC)/dt|_{t=0} f(A)^{1/2}) for g = t/f.
double first_order_lhs(const ScalarFunction& fn_f, const State& state,
                       const SymMatrix& a, const SymMatrix& c, double clamp = Tol::clamp);

struct DerivCondParams {
    double s;     // weight entry, in [0, 1]
    double alpha; // in (0, 1)
    double beta;  // > 0
};

// s a^2 (1 - b f'(b)/f(b)) + (1 - a^2)(1 - a f'(a)/f(a)); the algebraic
// reduction of first_order_lhs on the diag(beta, alpha) fixture.
double deriv_condition_closed_form(const ScalarFunction& fn_f, const DerivCondParams& p);

// The rank-one fixture behind the closed form: A = diag(beta, alpha),
// C the rank-one projector built from alpha, state weight diag(s, 1).
struct DerivFixture {
    SymMatrix a;
    SymMatrix c;
    State state;
};
DerivFixture deriv_condition_fixture(const DerivCondParams& p);

struct InfEstimate {
    double value = 0.0;
    double arg_lambda = 0.0; // argmin pair, lambda > mu
    double arg_mu = 0.0;
    int grid_size = 0;
    DomainInterval range;
};

// inf over grid pairs lambda > mu of sqrt(g'(lambda) g'(mu)) divided by the
// divided difference of g; the trace-characterization condition asks this to
// vanish over (0, inf). Corners of the range are always on the grid.
InfEstimate trace_condition_inf(const ScalarFunction& fn_g, const DomainInterval& range, int grid);

// Matrix-exponential example: returns
//   ( Tr((Ae^{-A})^{1/2} e^B (Ae^{-A})^{1/2}) - Tr(A),
//     Tr(e^X e^B) - Tr(e^{X+B}) with X = log(A e^{-A}) )
// Both are nonnegative for 0 < A <= B (second by Golden-Thompson).
std::pair<double, double> exp_example_check(const SymMatrix& a, const SymMatrix& b);

// Searches random ordered pairs for g(A) <= g(B) failing; on success builds
// B' = f(A)^{1/2} g(B) f(A)^{1/2} with f = t/g, extracts the top eigenvector
// xi of A - B', and emits a witness whose rank-one state breaks the ordered
// inequality.
Verdict counterexample_search(const ScalarFunction& fn_g, int dim, long trials,
                              std::uint64_t seed, int jobs = 1,
                              double psd_rel = Tol::psd_rel);

struct FixtureResult {
    std::string name;
    bool matches_expected = false;
    std::string detail;
};

struct FixtureReport {
    std::vector<FixtureResult> results;
    std::string dual_reading_note; // the t^3 example is computed both ways
    bool all_expected() const;
};

// Reruns every worked example with its exact matrices and compares against
// the claimed outcomes.
FixtureReport reproduce_fixtures();

// Replays a stored witness through the code path that produced it and
// returns the margin. Knows every property_id the toolkit emits.
double replay_witness(const Witness& w);

} // namespace loewner
