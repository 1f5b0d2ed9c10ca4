#pragma once

#include <algorithm>
#include <limits>
#include <thread>
#include <vector>

#include "loewner/expr.hpp"
#include "loewner/verdict.hpp"

namespace loewner {

// One falsification trial: a margin, plus a witness when the margin broke
// its tolerance.
struct TrialOutcome {
    double margin = 0.0;
    std::optional<Witness> witness;
};

// Runs `trials` independent trials of `fn(index)` across `jobs` workers and
// merges the outcomes. Every trial derives its randomness from its index, so
// the verdict is identical for any worker count: min over margins, witness
// with the lowest trial index, domain error with the lowest trial index.
// Domain errors take precedence over violations (they mean the check was
// probing outside the function's domain).
template <class Fn>
Verdict run_trials(long trials, int jobs, Fn&& fn) {
    struct Partial {
        double min_margin = std::numeric_limits<double>::infinity();
        std::optional<Witness> witness;
        long error_trial = -1;
        std::string error;
        bool any_margin = false;
    };

    jobs = std::max(1, jobs);
    if (trials < 1) trials = 1;
    const long chunk = (trials + jobs - 1) / jobs;
    std::vector<Partial> parts(static_cast<std::size_t>(jobs));

    auto worker = [&](int w) {
        Partial& p = parts[std::size_t(w)];
        const long lo = w * chunk;
        const long hi = std::min(trials, lo + chunk);
        for (long i = lo; i < hi; ++i) {
            try {
                TrialOutcome out = fn(i);
                p.any_margin = true;
                p.min_margin = std::min(p.min_margin, out.margin);
                if (out.witness && !p.witness) {
                    p.witness = std::move(out.witness);
                    p.witness->trial_index = i;
                }
            } catch (const DomainError& e) {
                if (p.error_trial < 0) {
                    p.error_trial = i;
                    p.error = e.what();
                }
            } catch (const EigError& e) {
                if (p.error_trial < 0) {
                    p.error_trial = i;
                    p.error = e.what();
                }
            }
        }
    };

    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(std::size_t(jobs));
        for (int w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
        for (auto& t : threads) t.join();
    }

    Verdict v;
    v.trials_run = trials;
    double m = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& p : parts) {
        if (p.any_margin) { any = true; m = std::min(m, p.min_margin); }
    }
    v.min_margin = any ? m : 0.0;
    for (const auto& p : parts) { // chunks are index-ordered
        if (p.witness) { v.witness = p.witness; break; }
    }
    for (const auto& p : parts) {
        if (p.error_trial >= 0) {
            v.status = Verdict::Status::DomainErr;
            v.error = p.error;
            v.error_trial = p.error_trial;
            return v;
        }
    }
    v.status = v.witness ? Verdict::Status::Violated : Verdict::Status::Holds;
    return v;
}

} // namespace loewner
