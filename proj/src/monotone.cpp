#include "loewner/monotone.hpp"

#include <algorithm>
#include <cmath>

#include "loewner/parallel.hpp"

namespace loewner {

namespace {

// Stream tags keep the checks' RNG streams disjoint at equal (seed, index).
enum StreamTag : std::uint64_t {
    kTagLoewnerNodes = 1,
    kTagOrderPair = 2,
    kTagConcave = 3,
    kTagHansenPedersen = 4,
};

} // namespace

NodeGrid NodeGrid::of(std::vector<double> pts, const DomainInterval& dom) {
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!(pts[i] > dom.lo && pts[i] < dom.hi))
            throw DomainError("grid node outside domain interval");
        if (i > 0 && !(pts[i] > pts[i - 1]))
            throw DomainError("grid nodes must be distinct");
    }
    return NodeGrid{std::move(pts)};
}

NodeGrid NodeGrid::random_log_uniform(int k, const DomainInterval& dom, Rng& rng) {
    std::vector<double> pts(static_cast<std::size_t>(k));
    for (int attempt = 0; attempt < 100; ++attempt) {
        for (auto& p : pts) p = rng.log_uniform(dom.lo, dom.hi);
        std::sort(pts.begin(), pts.end());
        bool distinct = true;
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (!(pts[i] > pts[i - 1])) { distinct = false; break; }
        if (distinct) return NodeGrid{std::move(pts)};
    }
    throw DomainError("failed to draw distinct grid nodes");
}

double divided_difference(const ScalarFunction& fn, double x, double y) {
    double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
    if (std::fabs(x - y) >= Tol::confluence_rel * scale)
        return (fn.eval(x) - fn.eval(y)) / (x - y);
    return fn.eval_dual(0.5 * (x + y)).second;
}

SymMatrix loewner_matrix(const ScalarFunction& fn, const NodeGrid& grid) {
    const int k = grid.size();
    SymMatrix l(k);
    for (int i = 0; i < k; ++i) {
        l.at(i, i) = fn.eval_dual(grid.nodes[std::size_t(i)]).second;
        for (int j = i + 1; j < k; ++j) {
            double v = divided_difference(fn, grid.nodes[std::size_t(i)], grid.nodes[std::size_t(j)]);
            l.set_sym(i, j, v);
        }
    }
    return l;
}

SymMatrix frechet_derivative(const ScalarFunction& fn, const SymMatrix& a,
                             const SymMatrix& c, double clamp) {
    if (a.dim() != c.dim())
        throw DimensionError("frechet_derivative: dimension mismatch");
    Spectrum s = eig_sym(a);
    const int n = a.dim();
    std::vector<double> lam(s.eigenvalues);
    for (auto& l : lam) l = std::max(l, clamp);

    Matrix rotated = s.eigenvectors.transpose() * c * s.eigenvectors;
    Matrix hadamard(n);
    for (int i = 0; i < n; ++i) {
        hadamard.at(i, i) = fn.eval_dual(lam[std::size_t(i)]).second * rotated.at(i, i);
        for (int j = i + 1; j < n; ++j) {
            double dd = divided_difference(fn, lam[std::size_t(i)], lam[std::size_t(j)]);
            hadamard.at(i, j) = dd * rotated.at(i, j);
            hadamard.at(j, i) = dd * rotated.at(j, i);
        }
    }
    return SymMatrix::symmetrized(s.eigenvectors * hadamard * s.eigenvectors.transpose());
}

std::pair<double, double> sampling_band(const DomainInterval& dom) {
    double lo = std::max(dom.lo, Tol::spectrum_band_lo);
    double hi = std::min(dom.hi, Tol::spectrum_band_hi);
    if (!(lo < hi)) { lo = dom.lo; hi = dom.hi; }
    return {lo, hi};
}

std::pair<SymMatrix, SymMatrix> random_ordered_pair_in(int n, double lo, double hi, Rng& rng) {
    SymMatrix a = random_psd(n, lo, hi, rng);
    Matrix w(n);
    for (double& v : w.data()) v = rng.normal();
    double s = rng.uniform01() * (hi / (2.0 * n));
    SymMatrix p = SymMatrix::symmetrized(s * (w * w.transpose()));
    SymMatrix b = SymMatrix::symmetrized(a + p);
    return {a, b};
}

Verdict check_n_monotone(const ScalarFunction& fn, int n, const DomainInterval& dom,
                         long trials, std::uint64_t seed, int jobs, double psd_rel) {
    if (n < 1) throw DomainError("order must be >= 1");
    auto [band_lo, band_hi] = sampling_band(dom);
    auto eps = [psd_rel](double scale) { return psd_rel * std::max(1.0, scale); };

    auto trial = [&, band_lo = band_lo, band_hi = band_hi](long idx) -> TrialOutcome {
        TrialOutcome out;

        // (a) Loewner positivity at random nodes.
        Rng rng_nodes = Rng::for_trial(seed, kTagLoewnerNodes, std::uint64_t(idx));
        NodeGrid grid = NodeGrid::random_log_uniform(n, dom, rng_nodes);
        SymMatrix l = loewner_matrix(fn, grid);
        double margin_a = min_eigenvalue(l);
        bool bad_a = margin_a < -eps(l.max_norm());

        // (b) Direct order test on a random ordered pair.
        Rng rng_pair = Rng::for_trial(seed, kTagOrderPair, std::uint64_t(idx));
        auto [a, b] = random_ordered_pair_in(n, band_lo, band_hi, rng_pair);
        SymMatrix diff = SymMatrix::symmetrized(apply_fn(fn, b, dom.lo) - apply_fn(fn, a, dom.lo));
        double margin_b = min_eigenvalue(diff);
        bool bad_b = margin_b < -eps(diff.max_norm());

        out.margin = std::min(margin_a, margin_b);
        if (bad_a) {
            Witness w;
            w.property_id = "loewner-psd";
            w.fn_text = fn.source();
            w.nodes = grid.nodes;
            w.margin = margin_a;
            out.witness = std::move(w);
        } else if (bad_b) {
            Witness w;
            w.property_id = "order";
            w.fn_text = fn.source();
            w.matrices.emplace_back("A", a);
            w.matrices.emplace_back("B", b);
            w.scalars.emplace_back("clamp", dom.lo);
            w.margin = margin_b;
            out.witness = std::move(w);
        }
        return out;
    };

    return run_trials(trials, jobs, trial);
}

Verdict check_n_concave(const ScalarFunction& fn, int n, const DomainInterval& dom,
                        long trials, std::uint64_t seed, int jobs, double psd_rel) {
    if (n < 1) throw DomainError("order must be >= 1");
    auto [band_lo, band_hi] = sampling_band(dom);
    auto eps = [psd_rel](double scale) { return psd_rel * std::max(1.0, scale); };

    auto trial = [&, band_lo = band_lo, band_hi = band_hi](long idx) -> TrialOutcome {
        Rng rng = Rng::for_trial(seed, kTagConcave, std::uint64_t(idx));
        SymMatrix a = random_psd(n, band_lo, band_hi, rng);
        SymMatrix b = random_psd(n, band_lo, band_hi, rng);
        double lambda = rng.uniform01();

        SymMatrix fa = apply_fn(fn, a, dom.lo);
        SymMatrix fb = apply_fn(fn, b, dom.lo);

        auto margin_at = [&](double lam) {
            SymMatrix mix = SymMatrix::symmetrized(lam * a + (1.0 - lam) * b);
            SymMatrix gap = SymMatrix::symmetrized(
                apply_fn(fn, mix, dom.lo) - (lam * fa + (1.0 - lam) * fb));
            return std::make_pair(min_eigenvalue(gap), eps(gap.max_norm()));
        };

        // Every trial probes the drawn weight and the midpoint; the midpoint
        // is the sharpest regression detector for convexity-type failures.
        auto [m_rand, eps_rand] = margin_at(lambda);
        auto [m_half, eps_half] = margin_at(0.5);

        TrialOutcome out;
        out.margin = std::min(m_rand, m_half);
        bool bad_rand = m_rand < -eps_rand;
        bool bad_half = m_half < -eps_half;
        if (bad_rand || bad_half) {
            Witness w;
            w.property_id = "concavity";
            w.fn_text = fn.source();
            w.matrices.emplace_back("A", a);
            w.matrices.emplace_back("B", b);
            // Report the weight with the deeper violation.
            if (bad_half && (!bad_rand || m_half <= m_rand)) {
                w.scalars.emplace_back("lambda", 0.5);
                w.margin = m_half;
            } else {
                w.scalars.emplace_back("lambda", lambda);
                w.margin = m_rand;
            }
            w.scalars.emplace_back("clamp", dom.lo);
            out.witness = std::move(w);
        }
        return out;
    };

    return run_trials(trials, jobs, trial);
}

Verdict check_hansen_pedersen(const ScalarFunction& fn, int n, const DomainInterval& dom,
                              long trials, std::uint64_t seed, int jobs, double psd_rel) {
    if (n < 1) throw DomainError("order must be >= 1");
    auto [band_lo, band_hi] = sampling_band(dom);
    auto eps = [psd_rel](double scale) { return psd_rel * std::max(1.0, scale); };

    auto trial = [&, band_lo = band_lo, band_hi = band_hi](long idx) -> TrialOutcome {
        Rng rng = Rng::for_trial(seed, kTagHansenPedersen, std::uint64_t(idx));
        SymMatrix a = random_psd(n, band_lo, band_hi, rng);

        Matrix c;
        const long phase = idx % Tol::boundary_injection_period;
        if (phase == 0) {
            c = Matrix::identity(n);
        } else if (phase == Tol::boundary_injection_period / 2) {
            // Coordinate projection onto the first ceil(n/2) axes.
            c = Matrix(n);
            for (int i = 0; i < (n + 1) / 2; ++i) c.at(i, i) = 1.0;
        } else {
            c = random_contraction(n, rng);
        }

        SymMatrix cac = SymMatrix::symmetrized(c.transpose() * a * c);
        SymMatrix lhs = apply_fn(fn, cac, dom.lo);
        SymMatrix rhs = SymMatrix::symmetrized(c.transpose() * apply_fn(fn, a, dom.lo) * c);
        SymMatrix gap = SymMatrix::symmetrized(lhs - rhs);
        double margin = min_eigenvalue(gap);

        TrialOutcome out;
        out.margin = margin;
        if (margin < -eps(gap.max_norm())) {
            Witness w;
            w.property_id = "hansen-pedersen";
            w.fn_text = fn.source();
            w.matrices.emplace_back("A", a);
            w.matrices.emplace_back("C", c);
            w.scalars.emplace_back("clamp", dom.lo);
            w.margin = margin;
            out.witness = std::move(w);
        }
        return out;
    };

    return run_trials(trials, jobs, trial);
}

bool ChainReport::any_violated() const {
    return concave_next.violated() || hansen_pedersen.violated() ||
           companion_monotone.violated() || concave_half.violated();
}

bool ChainReport::any_domain_error() const {
    auto bad = [](const Verdict& v) { return v.status == Verdict::Status::DomainErr; };
    return bad(concave_next) || bad(hansen_pedersen) || bad(companion_monotone) || bad(concave_half);
}

ChainReport chain_consistency(const ScalarFunction& fn_f, int n, const DomainInterval& dom,
                              long trials, std::uint64_t seed, int jobs, double psd_rel) {
    if (n < 2) throw DomainError("chain consistency needs order >= 2");
    ChainReport r;
    r.concave_next = check_n_concave(fn_f, n + 1, dom, trials, seed, jobs, psd_rel);
    r.hansen_pedersen = check_hansen_pedersen(fn_f, n, dom, trials, seed, jobs, psd_rel);
    r.companion_monotone = check_n_monotone(fn_f.companion(), n, dom, trials, seed, jobs, psd_rel);
    r.concave_half = check_n_concave(fn_f, std::max(1, n / 2), dom, trials, seed, jobs, psd_rel);

    // Hard evidence flows along contrapositives only: a witness downstream
    // of an implication means the upstream assertion is false, so a
    // holds-within-budget there indicates a falsifier that missed a
    // violation the theorem guarantees to exist.
    auto flag = [&r](const char* msg) { r.inconsistencies.emplace_back(msg); };
    if (r.hansen_pedersen.violated() && r.concave_next.holds())
        flag("(5)_n violated but (4)_{n+1} holds-within-budget; (4)_{n+1} => (5)_n demands a concavity witness");
    if (r.companion_monotone.violated() && r.hansen_pedersen.holds())
        flag("(6)_n violated but (5)_n holds-within-budget; (5)_n ~ (6)_n demands a contraction witness");
    if (r.hansen_pedersen.violated() && r.companion_monotone.holds())
        flag("(5)_n violated but (6)_n holds-within-budget; (5)_n ~ (6)_n demands a monotonicity witness");
    if (r.concave_half.violated() && r.companion_monotone.holds())
        flag("(4)_{[n/2]} violated but (6)_n holds-within-budget; (6)_n => (4)_{[n/2]} demands a monotonicity witness");
    return r;
}

} // namespace loewner
