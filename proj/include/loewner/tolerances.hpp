#pragma once

// Central numeric policy. Every module reads its tolerances from here so
// there is exactly one place where the defaults live; the CLI surfaces the
// relevant ones as flags.

namespace loewner {

struct Tol {
    // Scale-relative PSD tolerance: M is accepted as PSD when
    // lambda_min(M) >= -psd_rel * max(1, max_norm(M)).
    static constexpr double psd_rel = 1e-8;

    // Eigenvalues below this are raised to it before functional calculus
    // on functions defined on (0, inf).
    static constexpr double clamp = 1e-6;

    // Divided differences switch to the derivative when
    // |x - y| < confluence_rel * max(1, |x|, |y|).
    static constexpr double confluence_rel = 1e-7;

    // Divisors with magnitude below this are a domain error, not +-inf.
    static constexpr double divisor_min = 1e-300;

    // Jacobi eigensolver: stop when off-diagonal Frobenius norm falls
    // below jacobi_rel * ||A||_F, or after jacobi_max_sweeps sweeps.
    static constexpr double jacobi_rel = 1e-13;
    static constexpr int jacobi_max_sweeps = 100;

    // Working domain for functions declared on (0, inf).
    static constexpr double domain_lo = 1e-6;
    static constexpr double domain_hi = 1e6;

    // Random matrix spectra are sampled log-uniform inside this band
    // (intersected with the declared domain) to keep conditioning sane.
    static constexpr double spectrum_band_lo = 5e-2;
    static constexpr double spectrum_band_hi = 2e1;

    // Narrower band for the matrix-exponential example, so e^B stays
    // far away from overflow.
    static constexpr double exp_band_hi = 5.0;

    // Deterministic boundary cases (C = I, coordinate projection,
    // mixing weight 1/2) are injected every this many trials.
    static constexpr int boundary_injection_period = 16;

    // Hard cap on matrix dimension.
    static constexpr int max_dim = 64;
};

// PSD acceptance threshold for a matrix whose max-norm is `scale`.
inline double psd_eps(double scale) {
    return Tol::psd_rel * (scale > 1.0 ? scale : 1.0);
}

} // namespace loewner
