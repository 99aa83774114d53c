// estimation.hpp — shot-noise Monte-Carlo simulation of the hybrid
// quantum-classical coherence estimation loop.
//
// Per-outcome Im <x|K rho|x> is estimated from central differences of
// sampled Born frequencies at translated states rho_{+delta}, rho_{-delta}:
//   (freq_+ - freq_-) / (4 delta),
// with bias O(delta^2) and noise O(1/(delta sqrt(shots))). The noisy
// objective sum_x |estimate_x| drives the simplex optimizer; candidates
// compared within one simplex step share their random numbers, and fresh
// seeds are drawn across steps. The recorded estimate averages fresh
// replicate measurements at the final basis so it carries no running-max
// bias; its spread gives the standard error.

#pragma once

#include "coherence.hpp"
#include "core.hpp"

#include <vector>

namespace asymcoh {

// Multinomial draw from the exact Born vector; counts sum to shots.
std::vector<long long> sample_born(const DensityMatrix& rho, const OrthonormalBasis& basis,
                                   long long shots, RngStream& rng);
std::vector<long long> sample_born(const DensityMatrix& rho, const OrthonormalBasis& basis,
                                   long long shots, std::uint64_t seed);

// Per-outcome estimates of Im <x|K rho|x>; shots Born samples at each of the
// two translated states. delta must lie in (0, 0.1].
RealVector estimate_im_weak_value_terms(const DensityMatrix& rho, const GeneratorObservable& k,
                                        const OrthonormalBasis& basis, double delta,
                                        long long shots, RngStream& rng);
RealVector estimate_im_weak_value_terms(const DensityMatrix& rho, const GeneratorObservable& k,
                                        const OrthonormalBasis& basis, double delta,
                                        long long shots, std::uint64_t seed);

struct EstimationBudget {
    long long shots = 1'000'000; // per probability
    double delta = 0.01;
    int restarts = 2;
    int max_iters = 150;
    int replicates = 50; // fresh re-measurements at the final basis
};

struct EstimationRecord {
    long long shots = 0;
    double delta = 0.0;
    double estimate = 0.0;       // replicate mean at the final basis
    double stderr_est = 0.0;     // single-measurement standard error (replicate spread)
    double optimizer_best = 0.0; // best noisy objective seen during the search
    double exact = 0.0;          // closed-form reference
    std::uint64_t seed = 0;
    int iterations = 0; // worst per-restart count; == max_iters flags non-convergence
    int replicates = 0;
};

EstimationRecord estimate_tc_w_coherence(const DensityMatrix& rho, const GeneratorObservable& k,
                                         const EstimationBudget& budget, std::uint64_t seed);

struct ConvergenceRow {
    long long shots = 0;
    double mean_abs_error = 0.0;
    double stderr_est = 0.0;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double slope_fit = 0.0; // least-squares slope of log10(error) vs log10(shots)
    bool has_stderr = true; // absent when repeats == 1
};

ConvergenceStudy convergence_study(const DensityMatrix& rho, const GeneratorObservable& k,
                                   const std::vector<long long>& shot_grid, int repeats,
                                   const EstimationBudget& budget, std::uint64_t seed);

} // namespace asymcoh
