#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "loewner/expr.hpp"
#include "loewner/rng.hpp"
#include "loewner/tolerances.hpp"

namespace loewner {

// Pass as the clamp for functions defined on the whole real line (exp of a
// log-matrix); spectra are used as computed.
inline constexpr double kNoClamp = -std::numeric_limits<double>::infinity();

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Jacobi sweep budget exhausted; signals pathological input.
struct EigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense square matrix, row-major. Not necessarily symmetric (contractions
// and rotation factors live here).
class Matrix {
public:
    Matrix() = default;
    Matrix(int n, double fill = 0.0);

    static Matrix identity(int n);

    int dim() const { return n_; }
    double& at(int i, int j) { return a_[std::size_t(i) * n_ + j]; }
    double at(int i, int j) const { return a_[std::size_t(i) * n_ + j]; }
    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    Matrix transpose() const;
    double trace() const;
    double max_norm() const;   // max |a_ij|
    double frob_norm() const;

    friend Matrix operator*(const Matrix& x, const Matrix& y);
    friend Matrix operator+(const Matrix& x, const Matrix& y);
    friend Matrix operator-(const Matrix& x, const Matrix& y);
    friend Matrix operator*(double c, const Matrix& x);

protected:
    int n_ = 0;
    std::vector<double> a_;
};

double trace_of_product(const Matrix& x, const Matrix& y); // tr(x*y) without forming it

// Symmetric matrix; entries are symmetrized exactly on construction.
class SymMatrix : public Matrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n, double fill = 0.0) : Matrix(n, fill) {}

    // Symmetrize an arbitrary square matrix: (M + M^T)/2, stored exactly
    // symmetric entry by entry.
    static SymMatrix symmetrized(const Matrix& m);
    static SymMatrix from_rows(int n, const std::vector<std::vector<double>>& rows);
    static SymMatrix diagonal(const std::vector<double>& d);
    static SymMatrix identity(int n);
    // Rank-one projector xi * xi^T.
    static SymMatrix outer(const std::vector<double>& xi);

    void set_sym(int i, int j, double v) { at(i, j) = v; at(j, i) = v; }
};

// Eigendecomposition A = Q diag(lambda) Q^T, eigenvalues ascending.
struct Spectrum {
    std::vector<double> eigenvalues;
    Matrix eigenvectors; // columns
};

// Cyclic Jacobi; converges when the off-diagonal Frobenius norm drops below
// Tol::jacobi_rel * ||A||_F, errors out after Tol::jacobi_max_sweeps sweeps.
Spectrum eig_sym(const SymMatrix& a);

double min_eigenvalue(const SymMatrix& a);
double max_eigenvalue(const SymMatrix& a);

// lambda_min(m) >= -psd_eps(max_norm) ?
bool is_psd(const SymMatrix& m);

// Spectral functional calculus: Q diag(fn(max(lambda_i, clamp))) Q^T.
SymMatrix apply_fn(const ScalarFunction& fn, const SymMatrix& a, double clamp = Tol::clamp);

// Spectral absolute value of A - B.
SymMatrix abs_diff(const SymMatrix& a, const SymMatrix& b);

// phi(X) = Tr(S X), with S a density-like weight, or the canonical
// (unnormalized) trace. Density states must have unit trace; plain positive
// functionals (the diag(s,1) first-order fixture) skip that check.
class State {
public:
    State() = default; // canonical trace

    static State canonical_trace();
    static State density(const SymMatrix& weight);     // PSD, trace 1
    static State functional(const SymMatrix& weight);  // PSD only
    static State rank_one(const std::vector<double>& xi);

    double operator()(const Matrix& x) const;
    bool is_canonical() const { return canonical_; }
    const SymMatrix& weight() const { return weight_; }

private:
    bool canonical_ = true;
    SymMatrix weight_;
};

// Eigenvalues log-uniform in [spec_lo, spec_hi], conjugated by a random
// orthogonal matrix; deterministic for a fixed rng state.
SymMatrix random_psd(int n, double spec_lo, double spec_hi, Rng& rng);

// A positive definite, B = A + P with P PSD, so 0 < A <= B. Spectra live in
// the conditioning band from tolerances.hpp.
std::pair<SymMatrix, SymMatrix> random_ordered_pair(int n, Rng& rng);

// General matrix with largest singular value <= 1; the scale factor is
// uniform on (0, 1], so the boundary case is reachable.
Matrix random_contraction(int n, Rng& rng);

Matrix random_orthogonal(int n, Rng& rng);
SymMatrix random_symmetric(int n, Rng& rng); // Gaussian entries

double spectral_norm(const Matrix& m); // largest singular value

// Block-diagonal A (+) fill*I_m.
SymMatrix direct_sum_pad(const SymMatrix& a, int m, double fill);

} // namespace loewner
