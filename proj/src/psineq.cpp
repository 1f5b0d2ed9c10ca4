#include "loewner/psineq.hpp"

#include <algorithm>
#include <cmath>

#include "loewner/parallel.hpp"

namespace loewner {

namespace {

enum StreamTag : std::uint64_t {
    kTagPsPairs = 16,
    kTagCounterexample = 17,
    kTagFixtureSuite = 18,
};

SymMatrix sandwich(const SymMatrix& bread, const SymMatrix& filling) {
    return SymMatrix::symmetrized(bread * filling * bread);
}

// f(A)^{1/2} g(B) f(A)^{1/2} with f(A)^{1/2} evaluated as sqrt(f) by
// spectral calculus.
SymMatrix ps_core(const ScalarFunction& fn_f, const SymMatrix& a, const SymMatrix& b,
                  double clamp) {
    SymMatrix sqrt_fa = apply_fn(fn_f.sqrt_of(), a, clamp);
    SymMatrix gb = apply_fn(fn_f.companion(), b, clamp);
    return sandwich(sqrt_fa, gb);
}

// The 2x2 pair whose companion form contradicts the inequality for f = t^2:
// A = [[1,1],[1,1]], B = [[2,1],[1,2]], A <= B, A B^{-1} A = (2/3) A.
std::pair<SymMatrix, SymMatrix> example_pair() {
    SymMatrix a = SymMatrix::from_rows(2, {{1, 1}, {1, 1}});
    SymMatrix b = SymMatrix::from_rows(2, {{2, 1}, {1, 2}});
    return {a, b};
}

void check_ordered(const SymMatrix& a, const SymMatrix& b) {
    SymMatrix diff = SymMatrix::symmetrized(b - a);
    double lo = min_eigenvalue(diff);
    if (lo < -psd_eps(diff.max_norm()))
        throw OrderError("ordered margin requires A <= B; lambda_min(B-A) = " + std::to_string(lo));
}

} // namespace

double ps_margin(const ScalarFunction& fn_f, const State& state,
                 const SymMatrix& a, const SymMatrix& b, double clamp) {
    SymMatrix core = ps_core(fn_f, a, b, clamp);
    return 2.0 * state(core) - state(a) - state(b) + state(abs_diff(a, b));
}

double ps_margin_ordered(const ScalarFunction& fn_f, const State& state,
                         const SymMatrix& a, const SymMatrix& b, double clamp) {
    check_ordered(a, b);
    SymMatrix core = ps_core(fn_f, a, b, clamp);
    return state(core) - state(a);
}

Verdict check_ps(const PsCheckConfig& config) {
    if (config.dim < 1) throw DomainError("dimension must be >= 1");
    auto [band_lo, band_hi] = sampling_band(config.domain);
    const double clamp = config.clamp;
    const double psd_rel = config.psd_rel;

    auto trial = [&, band_lo = band_lo, band_hi = band_hi](long idx) -> TrialOutcome {
        Rng rng = Rng::for_trial(config.seed, kTagPsPairs, std::uint64_t(idx));

        SymMatrix a, b;
        if (config.inject_fixture && idx == 0 && config.dim >= 2) {
            // The known bad pair for f = t^2, padded with an identity block;
            // it is ordered, so it probes both margin modes.
            auto [a2, b2] = example_pair();
            a = direct_sum_pad(a2, config.dim - 2, 1.0);
            b = direct_sum_pad(b2, config.dim - 2, 1.0);
        } else if (config.ordered_only) {
            std::tie(a, b) = random_ordered_pair_in(config.dim, band_lo, band_hi, rng);
        } else {
            a = random_psd(config.dim, band_lo, band_hi, rng);
            b = random_psd(config.dim, band_lo, band_hi, rng);
        }

        double margin = config.ordered_only
                            ? ps_margin_ordered(config.fn_f, config.state, a, b, clamp)
                            : ps_margin(config.fn_f, config.state, a, b, clamp);
        double scale = std::max({std::fabs(config.state(a)), std::fabs(config.state(b)), 1.0});

        TrialOutcome out;
        out.margin = margin;
        if (margin < -psd_rel * scale) {
            Witness w;
            w.property_id = config.ordered_only ? "powers-stormer-ordered" : "powers-stormer";
            w.fn_text = config.fn_f.source();
            w.matrices.emplace_back("A", a);
            w.matrices.emplace_back("B", b);
            if (!config.state.is_canonical())
                w.matrices.emplace_back("state", config.state.weight());
            w.scalars.emplace_back("canonical_state", config.state.is_canonical() ? 1.0 : 0.0);
            w.scalars.emplace_back("clamp", clamp);
            w.margin = margin;
            out.witness = std::move(w);
        }
        return out;
    };

    return run_trials(config.trials, config.jobs, trial);
}

double first_order_lhs(const ScalarFunction& fn_f, const State& state,
                       const SymMatrix& a, const SymMatrix& c, double clamp) {
    SymMatrix dg = frechet_derivative(fn_f.companion(), a, c, clamp);
    SymMatrix sqrt_fa = apply_fn(fn_f.sqrt_of(), a, clamp);
    return state(sandwich(sqrt_fa, dg));
}

double deriv_condition_closed_form(const ScalarFunction& fn_f, const DerivCondParams& p) {
    auto [f_beta, df_beta] = fn_f.eval_dual(p.beta);
    auto [f_alpha, df_alpha] = fn_f.eval_dual(p.alpha);
    double a2 = p.alpha * p.alpha;
    return p.s * a2 * (1.0 - p.beta * df_beta / f_beta) +
           (1.0 - a2) * (1.0 - p.alpha * df_alpha / f_alpha);
}

DerivFixture deriv_condition_fixture(const DerivCondParams& p) {
    if (!(p.alpha > 0.0 && p.alpha < 1.0))
        throw DomainError("fixture needs alpha in (0, 1)");
    if (!(p.beta > 0.0)) throw DomainError("fixture needs beta > 0");
    if (!(p.s >= 0.0 && p.s <= 1.0)) throw DomainError("fixture needs s in [0, 1]");

    DerivFixture fx;
    fx.a = SymMatrix::diagonal({p.beta, p.alpha});
    double root = p.alpha * std::sqrt(1.0 - p.alpha * p.alpha);
    fx.c = SymMatrix::from_rows(2, {{p.alpha * p.alpha, root},
                                    {root, 1.0 - p.alpha * p.alpha}});
    fx.state = State::functional(SymMatrix::diagonal({p.s, 1.0}));
    return fx;
}

InfEstimate trace_condition_inf(const ScalarFunction& fn_g, const DomainInterval& range, int grid) {
    if (grid < 2) throw DomainError("grid must have at least two nodes");

    std::vector<double> nodes(static_cast<std::size_t>(grid));
    const double log_lo = std::log(range.lo);
    const double log_hi = std::log(range.hi);
    for (int k = 0; k < grid; ++k)
        nodes[std::size_t(k)] = std::exp(log_lo + (log_hi - log_lo) * double(k) / double(grid - 1));
    nodes.front() = range.lo; // corners sit exactly on the range
    nodes.back() = range.hi;

    std::vector<double> vals(static_cast<std::size_t>(grid)), ders(static_cast<std::size_t>(grid));
    for (int k = 0; k < grid; ++k) {
        auto [v, d] = fn_g.eval_dual(nodes[std::size_t(k)]);
        if (!(d > 0.0))
            throw NotIncreasingError("g'(" + std::to_string(nodes[std::size_t(k)]) +
                                     ") is not positive; g must be strictly increasing");
        vals[std::size_t(k)] = v;
        ders[std::size_t(k)] = d;
    }

    InfEstimate best;
    best.grid_size = grid;
    best.range = range;
    bool first = true;
    for (int j = 1; j < grid; ++j) {     // lambda = nodes[j]
        for (int i = 0; i < j; ++i) {    // mu = nodes[i]
            double lam = nodes[std::size_t(j)], mu = nodes[std::size_t(i)];
            double dd = (vals[std::size_t(j)] - vals[std::size_t(i)]) / (lam - mu);
            if (!(dd > 0.0))
                throw NotIncreasingError("divided difference of g is not positive on (" +
                                         std::to_string(mu) + ", " + std::to_string(lam) + ")");
            double ratio = std::sqrt(ders[std::size_t(j)] * ders[std::size_t(i)]) / dd;
            if (first || ratio < best.value) {
                best.value = ratio;
                best.arg_lambda = lam;
                best.arg_mu = mu;
                first = false;
            }
        }
    }
    return best;
}

std::pair<double, double> exp_example_check(const SymMatrix& a, const SymMatrix& b) {
    check_ordered(a, b);

    static const ScalarFunction h = ScalarFunction::parse("t/exp(t)");       // t e^{-t}
    static const ScalarFunction log_h = ScalarFunction::parse("log(t)-t");   // log(t e^{-t})
    static const ScalarFunction exp_fn = ScalarFunction::parse("exp(t)");

    SymMatrix sqrt_h_a = apply_fn(h.sqrt_of(), a);
    SymMatrix e_b = apply_fn(exp_fn, b, kNoClamp);
    double margin = sandwich(sqrt_h_a, e_b).trace() - a.trace();

    // X = log(A e^{-A}) has negative spectrum; exp must see it unclamped.
    SymMatrix x = apply_fn(log_h, a);
    SymMatrix e_x = apply_fn(exp_fn, x, kNoClamp);
    SymMatrix xy = SymMatrix::symmetrized(x + b);
    double gt_margin = trace_of_product(e_x, e_b) - apply_fn(exp_fn, xy, kNoClamp).trace();

    return {margin, gt_margin};
}

Verdict counterexample_search(const ScalarFunction& fn_g, int dim, long trials,
                              std::uint64_t seed, int jobs, double psd_rel) {
    if (dim < 2) throw DomainError("counterexample search needs dim >= 2");
    const ScalarFunction fn_f = fn_g.companion(); // involution: f = t/g
    const DomainInterval dom;
    auto [band_lo, band_hi] = sampling_band(dom);

    auto trial = [&, band_lo = band_lo, band_hi = band_hi](long idx) -> TrialOutcome {
        Rng rng = Rng::for_trial(seed, kTagCounterexample, std::uint64_t(idx));
        auto [a, b] = random_ordered_pair_in(dim, band_lo, band_hi, rng);

        SymMatrix ga = apply_fn(fn_g, a);
        SymMatrix gb = apply_fn(fn_g, b);
        SymMatrix diff = SymMatrix::symmetrized(gb - ga);
        double order_margin = min_eigenvalue(diff);

        TrialOutcome out;
        out.margin = order_margin;
        if (order_margin >= -psd_rel * std::max(1.0, diff.max_norm()))
            return out; // g looks monotone on this pair

        // g(A) <= g(B) failed, so A <= f(A)^{1/2} g(B) f(A)^{1/2} must fail:
        // pick the state from the top eigenvector of the gap.
        SymMatrix sqrt_fa = apply_fn(fn_f.sqrt_of(), a);
        SymMatrix b_prime = sandwich(sqrt_fa, gb);
        SymMatrix gap = SymMatrix::symmetrized(a - b_prime);
        Spectrum spec = eig_sym(gap);
        double top = spec.eigenvalues.back();
        if (top <= psd_eps(gap.max_norm()))
            return out; // violation too shallow to extract a usable state

        std::vector<double> xi(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i)
            xi[std::size_t(i)] = spec.eigenvectors.at(i, dim - 1);

        State state = State::rank_one(xi);
        double margin = ps_margin_ordered(fn_f, state, a, b);
        if (margin >= -1e-7) // too shallow to be a trustworthy witness
            return out;

        Witness w;
        w.property_id = "counterexample";
        w.fn_text = fn_g.source();
        w.matrices.emplace_back("A", a);
        w.matrices.emplace_back("B", b);
        w.xi = xi;
        w.margin = margin;
        out.witness = std::move(w);
        out.margin = margin;
        return out;
    };

    return run_trials(trials, jobs, trial);
}

// ---------------------------------------------------------------------------
// Fixture reproduction.

namespace {

FixtureResult fixture_example_t2() {
    FixtureResult r;
    r.name = "t^2 ordered pair (2x2)";
    auto [a, b] = example_pair();

    ScalarFunction f = ScalarFunction::parse("t^2");
    SymMatrix b_inv = apply_fn(ScalarFunction::parse("1/t"), b);
    SymMatrix aba = SymMatrix::symmetrized(a * b_inv * a);
    SymMatrix two_thirds_a = SymMatrix::symmetrized((2.0 / 3.0) * a);

    double prod_dev = SymMatrix::symmetrized(aba - two_thirds_a).max_norm();
    double tr_core = aba.trace();
    double margin = ps_margin_ordered(f, State::canonical_trace(), a, b);

    bool ok = prod_dev <= 1e-9 &&
              std::fabs(tr_core - 4.0 / 3.0) <= 1e-9 &&
              std::fabs(a.trace() - 2.0) <= 1e-12 &&
              std::fabs(margin + 2.0 / 3.0) <= 1e-9;
    r.matches_expected = ok;
    r.detail = "A B^{-1} A = (2/3)A, Tr = 4/3 < 2 = Tr(A); ordered margin " + std::to_string(margin);
    return r;
}

FixtureResult fixture_deriv_condition() {
    FixtureResult r;
    r.name = "t^p first-order condition";
    ScalarFunction f = ScalarFunction::parse("t^2");
    DerivCondParams p{0.7, 0.6, 1.8};
    double closed = deriv_condition_closed_form(f, p);
    double expect = (p.s * p.alpha * p.alpha + 1.0 - p.alpha * p.alpha) * (1.0 - 2.0);

    DerivFixture fx = deriv_condition_fixture(p);
    double lhs = first_order_lhs(f, fx.state, fx.a, fx.c);

    bool ok = closed < 0.0 && std::fabs(closed - expect) <= 1e-12 &&
              std::fabs(lhs - closed) <= 1e-9;
    r.matches_expected = ok;
    r.detail = "closed form " + std::to_string(closed) + " < 0 for p = 2; rank-one fixture agrees";
    return r;
}

FixtureResult fixture_inverse_function() {
    FixtureResult r;
    r.name = "g = t^2 ordered inequality";
    ScalarFunction f = ScalarFunction::parse("1/t"); // g = t^2
    double worst = 0.0;
    double max_identity_dev = 0.0;
    const State trace = State::canonical_trace();
    for (int dim = 2; dim <= 6; ++dim) {
        for (long k = 0; k < 50; ++k) {
            Rng rng = Rng::for_trial(2024, kTagFixtureSuite, std::uint64_t(dim * 1000 + k));
            auto [a, b] = random_ordered_pair_in(dim, Tol::spectrum_band_lo, Tol::spectrum_band_hi, rng);
            double margin = ps_margin_ordered(f, trace, a, b);
            worst = std::min(worst, margin);

            // Tr(A^{-1/2} B^2 A^{-1/2}) = Tr(B A^{-1} B)
            SymMatrix a_inv = apply_fn(f, a);
            double alt = SymMatrix::symmetrized(b * a_inv * b).trace();
            double via_margin = margin + a.trace();
            max_identity_dev = std::max(max_identity_dev,
                                        std::fabs(alt - via_margin) / std::max(1.0, std::fabs(alt)));
        }
    }
    bool ok = worst >= -1e-7 && max_identity_dev <= 1e-8;
    r.matches_expected = ok;
    r.detail = "Tr(A) <= Tr(B A^{-1} B) held on 250 ordered pairs; worst margin " + std::to_string(worst);
    return r;
}

FixtureResult fixture_exponential() {
    FixtureResult r;
    r.name = "exponential inequality + Golden-Thompson";
    double worst = 0.0;
    for (long k = 0; k < 100; ++k) {
        Rng rng = Rng::for_trial(2025, kTagFixtureSuite, std::uint64_t(k));
        auto [a, b] = random_ordered_pair_in(4, Tol::spectrum_band_lo, Tol::exp_band_hi, rng);
        auto [margin, gt] = exp_example_check(a, b);
        worst = std::min({worst, margin, gt});
    }
    SymMatrix c = SymMatrix::diagonal({1.5, 1.5, 1.5});
    auto [m0, gt0] = exp_example_check(c, c);
    bool ok = worst >= -1e-7 && std::fabs(m0) <= 1e-9 && std::fabs(gt0) <= 1e-9;
    r.matches_expected = ok;
    r.detail = "margins >= -1e-7 on 100 ordered pairs; commuting case exact";
    return r;
}

std::pair<FixtureResult, FixtureResult> fixture_t3_both_readings() {
    SymMatrix a = SymMatrix::diagonal({2.0, 2.0});
    SymMatrix a_inv = apply_fn(ScalarFunction::parse("1/t"), a);

    FixtureResult printed;
    printed.name = "g = t^3 printed form";
    double tr_printed = SymMatrix::symmetrized(a_inv * a * a_inv).trace(); // Tr(A^{-1} B A^{-1}) at B = A
    printed.matches_expected = std::fabs(tr_printed - 1.0) <= 1e-9 && tr_printed < a.trace();
    printed.detail = "Tr(A^{-1} B A^{-1}) = " + std::to_string(tr_printed) + " < 4 = Tr(A) at A = B";

    FixtureResult companion;
    companion.name = "g = t^3 companion form";
    ScalarFunction f = ScalarFunction::parse("t^3").companion(); // f = t/t^3
    double margin = ps_margin_ordered(f, State::canonical_trace(), a, a);
    companion.matches_expected = std::fabs(margin) <= 1e-8;
    companion.detail = "Tr(A^{-1} B^3 A^{-1}) = Tr(A) at A = B; margin " + std::to_string(margin);

    return {printed, companion};
}

} // namespace

bool FixtureReport::all_expected() const {
    for (const auto& r : results)
        if (!r.matches_expected) return false;
    return true;
}

FixtureReport reproduce_fixtures() {
    FixtureReport rep;
    rep.results.push_back(fixture_example_t2());
    rep.results.push_back(fixture_deriv_condition());
    rep.results.push_back(fixture_inverse_function());
    rep.results.push_back(fixture_exponential());
    auto [printed, companion] = fixture_t3_both_readings();
    rep.results.push_back(printed);
    rep.results.push_back(companion);
    rep.dual_reading_note =
        "the t^3 example is evaluated in both its printed form Tr(A^{-1} B A^{-1}) and the "
        "companion-consistent form Tr(A^{-1} B^3 A^{-1}); the first contradicts at A = B, the "
        "second is an equality there, and neither reading is asserted as canonical";
    return rep;
}

// ---------------------------------------------------------------------------
// Witness replay.

double replay_witness(const Witness& w) {
    ScalarFunction fn = ScalarFunction::parse(w.fn_text);

    if (w.property_id == "loewner-psd") {
        NodeGrid grid{w.nodes};
        return min_eigenvalue(loewner_matrix(fn, grid));
    }
    if (w.property_id == "order") {
        double clamp = w.scalar("clamp");
        SymMatrix a = SymMatrix::symmetrized(w.matrix("A"));
        SymMatrix b = SymMatrix::symmetrized(w.matrix("B"));
        return min_eigenvalue(SymMatrix::symmetrized(apply_fn(fn, b, clamp) - apply_fn(fn, a, clamp)));
    }
    if (w.property_id == "concavity") {
        double clamp = w.scalar("clamp");
        double lam = w.scalar("lambda");
        SymMatrix a = SymMatrix::symmetrized(w.matrix("A"));
        SymMatrix b = SymMatrix::symmetrized(w.matrix("B"));
        SymMatrix mix = SymMatrix::symmetrized(lam * a + (1.0 - lam) * b);
        SymMatrix gap = SymMatrix::symmetrized(
            apply_fn(fn, mix, clamp) -
            (lam * apply_fn(fn, a, clamp) + (1.0 - lam) * apply_fn(fn, b, clamp)));
        return min_eigenvalue(gap);
    }
    if (w.property_id == "hansen-pedersen") {
        double clamp = w.scalar("clamp");
        SymMatrix a = SymMatrix::symmetrized(w.matrix("A"));
        const Matrix& c = w.matrix("C");
        SymMatrix cac = SymMatrix::symmetrized(c.transpose() * a * c);
        SymMatrix gap = SymMatrix::symmetrized(
            apply_fn(fn, cac, clamp) -
            SymMatrix::symmetrized(c.transpose() * apply_fn(fn, a, clamp) * c));
        return min_eigenvalue(gap);
    }
    if (w.property_id == "powers-stormer" || w.property_id == "powers-stormer-ordered") {
        double clamp = w.scalar("clamp");
        SymMatrix a = SymMatrix::symmetrized(w.matrix("A"));
        SymMatrix b = SymMatrix::symmetrized(w.matrix("B"));
        State state = w.scalar("canonical_state") != 0.0
                          ? State::canonical_trace()
                          : State::functional(SymMatrix::symmetrized(w.matrix("state")));
        return w.property_id == "powers-stormer"
                   ? ps_margin(fn, state, a, b, clamp)
                   : ps_margin_ordered(fn, state, a, b, clamp);
    }
    if (w.property_id == "counterexample") {
        SymMatrix a = SymMatrix::symmetrized(w.matrix("A"));
        SymMatrix b = SymMatrix::symmetrized(w.matrix("B"));
        return ps_margin_ordered(fn.companion(), State::rank_one(w.xi), a, b);
    }
    throw DomainError("unknown witness property_id: " + w.property_id);
}

} // namespace loewner
