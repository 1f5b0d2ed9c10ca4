#include "loewner/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace loewner {

Matrix::Matrix(int n, double fill) : n_(n), a_(std::size_t(n) * n, fill) {
    if (n < 0 || n > Tol::max_dim)
        throw DimensionError("matrix dimension out of range: " + std::to_string(n));
}

Matrix Matrix::identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            t.at(j, i) = at(i, j);
    return t;
}

double Matrix::trace() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += at(i, i);
    return s;
}

double Matrix::max_norm() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::fabs(v));
    return m;
}

double Matrix::frob_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

static void check_same_dim(const Matrix& x, const Matrix& y) {
    if (x.dim() != y.dim())
        throw DimensionError("dimension mismatch: " + std::to_string(x.dim()) +
                             " vs " + std::to_string(y.dim()));
}

Matrix operator*(const Matrix& x, const Matrix& y) {
    check_same_dim(x, y);
    const int n = x.dim();
    Matrix r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double xik = x.at(i, k);
            if (xik == 0.0) continue;
            for (int j = 0; j < n; ++j)
                r.at(i, j) += xik * y.at(k, j);
        }
    return r;
}

Matrix operator+(const Matrix& x, const Matrix& y) {
    check_same_dim(x, y);
    Matrix r = x;
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] += y.data()[i];
    return r;
}

Matrix operator-(const Matrix& x, const Matrix& y) {
    check_same_dim(x, y);
    Matrix r = x;
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] -= y.data()[i];
    return r;
}

Matrix operator*(double c, const Matrix& x) {
    Matrix r = x;
    for (double& v : r.data()) v *= c;
    return r;
}

double trace_of_product(const Matrix& x, const Matrix& y) {
    check_same_dim(x, y);
    const int n = x.dim();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s += x.at(i, j) * y.at(j, i);
    return s;
}

SymMatrix SymMatrix::symmetrized(const Matrix& m) {
    SymMatrix s(m.dim());
    for (int i = 0; i < m.dim(); ++i) {
        s.at(i, i) = m.at(i, i);
        for (int j = i + 1; j < m.dim(); ++j) {
            double v = 0.5 * (m.at(i, j) + m.at(j, i));
            s.at(i, j) = v;
            s.at(j, i) = v;
        }
    }
    return s;
}

SymMatrix SymMatrix::from_rows(int n, const std::vector<std::vector<double>>& rows) {
    Matrix m(n);
    if (int(rows.size()) != n) throw DimensionError("row count does not match dimension");
    for (int i = 0; i < n; ++i) {
        if (int(rows[i].size()) != n) throw DimensionError("column count does not match dimension");
        for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
    }
    return symmetrized(m);
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
    SymMatrix m(int(d.size()));
    for (int i = 0; i < m.dim(); ++i) m.at(i, i) = d[std::size_t(i)];
    return m;
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

SymMatrix SymMatrix::outer(const std::vector<double>& xi) {
    SymMatrix m(int(xi.size()));
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j)
            m.at(i, j) = xi[std::size_t(i)] * xi[std::size_t(j)];
    return m;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi eigensolver.

namespace {

double off_diag_frob(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (i != j) s += a.at(i, j) * a.at(i, j);
    return std::sqrt(s);
}

} // namespace

Spectrum eig_sym(const SymMatrix& input) {
    const int n = input.dim();
    Matrix a = input;
    Matrix q = Matrix::identity(n);

    if (n == 0) return {{}, q};

    const double target = Tol::jacobi_rel * std::max(input.frob_norm(), 1e-300);
    bool converged = off_diag_frob(a) <= target;
    for (int sweep = 0; sweep < Tol::jacobi_max_sweeps && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int r = p + 1; r < n; ++r) {
                double apr = a.at(p, r);
                if (apr == 0.0) continue;
                double app = a.at(p, p);
                double arr = a.at(r, r);
                double theta = (arr - app) / (2.0 * apr);
                // Smaller-angle root of t^2 + 2 theta t - 1 = 0.
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (int k = 0; k < n; ++k) {
                    double akp = a.at(k, p);
                    double akr = a.at(k, r);
                    a.at(k, p) = c * akp - s * akr;
                    a.at(k, r) = s * akp + c * akr;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a.at(p, k);
                    double ark = a.at(r, k);
                    a.at(p, k) = c * apk - s * ark;
                    a.at(r, k) = s * apk + c * ark;
                }
                // Clean the rotated pair; the analytic value is zero.
                a.at(p, r) = 0.0;
                a.at(r, p) = 0.0;

                for (int k = 0; k < n; ++k) {
                    double qkp = q.at(k, p);
                    double qkr = q.at(k, r);
                    q.at(k, p) = c * qkp - s * qkr;
                    q.at(k, r) = s * qkp + c * qkr;
                }
            }
        }
        converged = off_diag_frob(a) <= target;
    }
    if (!converged)
        throw EigError("Jacobi eigensolver did not converge within sweep budget");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&a](int i, int j) { return a.at(i, i) < a.at(j, j); });

    Spectrum out;
    out.eigenvalues.resize(std::size_t(n));
    out.eigenvectors = Matrix(n);
    for (int j = 0; j < n; ++j) {
        out.eigenvalues[std::size_t(j)] = a.at(order[std::size_t(j)], order[std::size_t(j)]);
        for (int i = 0; i < n; ++i)
            out.eigenvectors.at(i, j) = q.at(i, order[std::size_t(j)]);
    }
    return out;
}

double min_eigenvalue(const SymMatrix& a) {
    return eig_sym(a).eigenvalues.front();
}

double max_eigenvalue(const SymMatrix& a) {
    return eig_sym(a).eigenvalues.back();
}

bool is_psd(const SymMatrix& m) {
    return min_eigenvalue(m) >= -psd_eps(m.max_norm());
}

static SymMatrix recompose(const Spectrum& s, const std::vector<double>& mapped) {
    const int n = s.eigenvectors.dim();
    Matrix scaled = s.eigenvectors; // columns scaled by mapped eigenvalues
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            scaled.at(i, j) *= mapped[std::size_t(j)];
    return SymMatrix::symmetrized(scaled * s.eigenvectors.transpose());
}

SymMatrix apply_fn(const ScalarFunction& fn, const SymMatrix& a, double clamp) {
    Spectrum s = eig_sym(a);
    std::vector<double> mapped(s.eigenvalues.size());
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        double lam = std::max(s.eigenvalues[i], clamp);
        mapped[i] = fn.eval(lam);
    }
    return recompose(s, mapped);
}

SymMatrix abs_diff(const SymMatrix& a, const SymMatrix& b) {
    check_same_dim(a, b);
    SymMatrix d = SymMatrix::symmetrized(a - b);
    Spectrum s = eig_sym(d);
    std::vector<double> mapped(s.eigenvalues.size());
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
        mapped[i] = std::fabs(s.eigenvalues[i]);
    return recompose(s, mapped);
}

// ---------------------------------------------------------------------------
// States.

State State::canonical_trace() {
    return State();
}

State State::functional(const SymMatrix& weight) {
    double lo = min_eigenvalue(weight);
    if (lo < -1e-10)
        throw DomainError("state weight is not positive semidefinite");
    State s;
    s.canonical_ = false;
    s.weight_ = weight;
    return s;
}

State State::density(const SymMatrix& weight) {
    State s = functional(weight);
    if (std::fabs(weight.trace() - 1.0) > 1e-10)
        throw DomainError("density state must have unit trace");
    return s;
}

State State::rank_one(const std::vector<double>& xi) {
    double norm2 = 0.0;
    for (double v : xi) norm2 += v * v;
    if (norm2 <= 0.0) throw DomainError("rank-one state needs a nonzero vector");
    std::vector<double> unit(xi);
    double inv = 1.0 / std::sqrt(norm2);
    for (double& v : unit) v *= inv;
    State s;
    s.canonical_ = false;
    s.weight_ = SymMatrix::outer(unit);
    return s;
}

double State::operator()(const Matrix& x) const {
    if (canonical_) return x.trace();
    return trace_of_product(weight_, x);
}

// ---------------------------------------------------------------------------
// Random generators.

Matrix random_orthogonal(int n, Rng& rng) {
    // Gram-Schmidt on a Gaussian matrix; re-draw a column in the measure-zero
    // event it degenerates.
    Matrix q(n);
    for (int j = 0; j < n; ++j) {
        for (int attempt = 0;; ++attempt) {
            std::vector<double> col(static_cast<std::size_t>(n));
            for (auto& v : col) v = rng.normal();
            for (int k = 0; k < j; ++k) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += col[std::size_t(i)] * q.at(i, k);
                for (int i = 0; i < n; ++i) col[std::size_t(i)] -= dot * q.at(i, k);
            }
            double norm2 = 0.0;
            for (double v : col) norm2 += v * v;
            if (norm2 > 1e-12 || attempt > 32) {
                double inv = 1.0 / std::sqrt(norm2);
                for (int i = 0; i < n; ++i) q.at(i, j) = col[std::size_t(i)] * inv;
                break;
            }
        }
    }
    return q;
}

SymMatrix random_symmetric(int n, Rng& rng) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) {
        m.at(i, i) = rng.normal();
        for (int j = i + 1; j < n; ++j)
            m.set_sym(i, j, rng.normal());
    }
    return m;
}

SymMatrix random_psd(int n, double spec_lo, double spec_hi, Rng& rng) {
    if (!(spec_lo > 0.0) || spec_lo > spec_hi)
        throw DomainError("random_psd requires 0 < spec_lo <= spec_hi");
    std::vector<double> lams(static_cast<std::size_t>(n));
    for (auto& l : lams)
        l = (spec_lo == spec_hi) ? spec_lo : rng.log_uniform(spec_lo, spec_hi);
    Matrix q = random_orthogonal(n, rng);
    Matrix scaled = q;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            scaled.at(i, j) *= lams[std::size_t(j)];
    return SymMatrix::symmetrized(scaled * q.transpose());
}

std::pair<SymMatrix, SymMatrix> random_ordered_pair(int n, Rng& rng) {
    SymMatrix a = random_psd(n, Tol::spectrum_band_lo, Tol::spectrum_band_hi, rng);
    // P = s W W^T, s chosen so b's spectrum stays in scale with a's.
    Matrix w(n);
    for (double& v : w.data()) v = rng.normal();
    double s = rng.uniform01() * (Tol::spectrum_band_hi / (2.0 * n));
    SymMatrix p = SymMatrix::symmetrized(s * (w * w.transpose()));
    SymMatrix b = SymMatrix::symmetrized(a + p);
    return {a, b};
}

double spectral_norm(const Matrix& m) {
    SymMatrix gram = SymMatrix::symmetrized(m.transpose() * m);
    double lam = max_eigenvalue(gram);
    return std::sqrt(std::max(lam, 0.0));
}

Matrix random_contraction(int n, Rng& rng) {
    Matrix g(n);
    for (double& v : g.data()) v = rng.normal();
    double norm = spectral_norm(g);
    if (norm < 1e-12) return Matrix(n); // all-zero Gaussian; keep the zero map
    double factor = rng.uniform01_open_lo(); // (0, 1]; 1 reaches the boundary
    return (factor / norm) * g;
}

SymMatrix direct_sum_pad(const SymMatrix& a, int m, double fill) {
    if (m < 0) throw DimensionError("pad size must be nonnegative");
    SymMatrix out(a.dim() + m);
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            out.at(i, j) = a.at(i, j);
    for (int i = a.dim(); i < out.dim(); ++i)
        out.at(i, i) = fill;
    return out;
}

} // namespace loewner
