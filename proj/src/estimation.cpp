// estimation.cpp

#include "asymcoh/estimation.hpp"

#include "asymcoh/covariant.hpp"
#include "asymcoh/weak_values.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace asymcoh {

namespace {

void require_dim(Index a, Index b, const char* who) {
    if (a != b)
        fail("DimensionMismatch",
             std::string(who) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

// Conditional-binomial chain: O(d) binomial draws instead of O(shots).
std::vector<long long> multinomial(const RealVector& p, long long shots, RngStream& rng) {
    const Index d = p.size();
    std::vector<long long> counts(static_cast<size_t>(d), 0);
    double remaining_mass = p.sum();
    long long remaining = shots;
    for (Index i = 0; i + 1 < d && remaining > 0; ++i) {
        const double q = remaining_mass > 0.0 ? std::clamp(p(i) / remaining_mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<long long> binom(remaining, q);
        const long long n = binom(rng.engine());
        counts[static_cast<size_t>(i)] = n;
        remaining -= n;
        remaining_mass -= p(i);
    }
    counts[static_cast<size_t>(d - 1)] += remaining;
    return counts;
}

} // namespace

std::vector<long long> sample_born(const DensityMatrix& rho, const OrthonormalBasis& basis,
                                   long long shots, RngStream& rng) {
    require_dim(rho.dim(), basis.dim(), "sample_born");
    if (shots < 1) fail("InvalidOptions", "shots must be >= 1");
    return multinomial(born_probabilities(rho.matrix(), basis.matrix()), shots, rng);
}

std::vector<long long> sample_born(const DensityMatrix& rho, const OrthonormalBasis& basis,
                                   long long shots, std::uint64_t seed) {
    RngStream rng(seed);
    return sample_born(rho, basis, shots, rng);
}

namespace {

RealVector im_terms_from_counts(const Matrix& rho, const GeneratorObservable& k,
                                const Matrix& basis_cols, double delta, long long shots,
                                RngStream& rng) {
    const Matrix u_plus = translation_unitary(k, delta);
    const Matrix u_minus = translation_unitary(k, -delta);
    const RealVector p_plus =
        born_probabilities(u_plus * rho * u_plus.adjoint(), basis_cols);
    const RealVector p_minus =
        born_probabilities(u_minus * rho * u_minus.adjoint(), basis_cols);
    const std::vector<long long> c_plus = multinomial(p_plus, shots, rng);
    const std::vector<long long> c_minus = multinomial(p_minus, shots, rng);

    RealVector estimates(basis_cols.cols());
    const double norm = 1.0 / (4.0 * delta * static_cast<double>(shots));
    for (Index x = 0; x < basis_cols.cols(); ++x)
        estimates(x) = static_cast<double>(c_plus[static_cast<size_t>(x)] -
                                           c_minus[static_cast<size_t>(x)]) *
                       norm;
    return estimates;
}

} // namespace

RealVector estimate_im_weak_value_terms(const DensityMatrix& rho, const GeneratorObservable& k,
                                        const OrthonormalBasis& basis, double delta,
                                        long long shots, RngStream& rng) {
    require_dim(rho.dim(), k.dim(), "estimate_im_weak_value_terms");
    require_dim(rho.dim(), basis.dim(), "estimate_im_weak_value_terms");
    if (!(delta > 0.0 && delta <= 0.1))
        fail("DeltaOutOfRange", "delta must lie in (0, 0.1], got " + std::to_string(delta));
    if (shots < 100) fail("InvalidOptions", "shots must be >= 100");
    return im_terms_from_counts(rho.matrix(), k, basis.matrix(), delta, shots, rng);
}

RealVector estimate_im_weak_value_terms(const DensityMatrix& rho, const GeneratorObservable& k,
                                        const OrthonormalBasis& basis, double delta,
                                        long long shots, std::uint64_t seed) {
    RngStream rng(seed);
    return estimate_im_weak_value_terms(rho, k, basis, delta, shots, rng);
}

EstimationRecord estimate_tc_w_coherence(const DensityMatrix& rho, const GeneratorObservable& k,
                                         const EstimationBudget& budget, std::uint64_t seed) {
    require_dim(rho.dim(), k.dim(), "estimate_tc_w_coherence");
    if (budget.shots < 100) fail("InvalidOptions", "shots must be >= 100");
    if (!(budget.delta > 0.0 && budget.delta <= 0.1))
        fail("DeltaOutOfRange", "delta must lie in (0, 0.1]");
    if (budget.restarts < 1 || budget.max_iters < 1 || budget.replicates < 2)
        fail("InvalidOptions", "restarts, max_iters and replicates must be positive");

    const Index d = rho.dim();
    const Index param_dim = BasisParam::param_count(d);

    EstimationRecord record;
    record.shots = budget.shots;
    record.delta = budget.delta;
    record.seed = seed;
    record.replicates = budget.replicates;
    record.exact = tc_w_coherence_exact(rho, k);

    double best = -1.0;
    Matrix best_basis = Matrix::Identity(d, d);
    for (int r = 0; r < budget.restarts; ++r) {
        RngStream frame_rng(seed, 2 * static_cast<std::uint64_t>(r));
        const Matrix frame = haar_random_unitary(d, frame_rng);
        const std::uint64_t run_seed = RngStream::derive(seed, 2 * static_cast<std::uint64_t>(r) + 1);

        double restart_best = -1.0;
        Matrix restart_basis = frame;
        auto noisy = [&](const Eigen::VectorXd& lambda, int epoch) {
            const Matrix basis = frame * BasisParam::unitary(lambda, d);
            // Common random numbers within an epoch, fresh across epochs.
            RngStream rng(run_seed, static_cast<std::uint64_t>(epoch));
            const RealVector terms = im_terms_from_counts(rho.matrix(), k, basis, budget.delta,
                                                          budget.shots, rng);
            const double value = terms.cwiseAbs().sum();
            if (value > restart_best) {
                restart_best = value;
                restart_basis = basis;
            }
            return -value;
        };
        NelderMeadOptions nm;
        nm.max_iters = budget.max_iters;
        nm.f_tol = 0.0;  // value spread never settles under shot noise
        nm.x_tol = 0.02; // stop once the simplex has collapsed in parameter space
        nm.reevaluate_each_epoch = true;
        const NelderMeadResult res = nelder_mead(noisy, Eigen::VectorXd::Zero(param_dim), nm);
        record.iterations = std::max(record.iterations, res.iterations);
        if (restart_best > best) {
            best = restart_best;
            best_basis = restart_basis;
        }
    }
    record.optimizer_best = best;

    // Fresh replicate measurements at the final basis.
    RealVector replicate_values(budget.replicates);
    for (int r = 0; r < budget.replicates; ++r) {
        RngStream rng(seed, 0x5000000ULL + static_cast<std::uint64_t>(r));
        const RealVector terms =
            im_terms_from_counts(rho.matrix(), k, best_basis, budget.delta, budget.shots, rng);
        replicate_values(r) = terms.cwiseAbs().sum();
    }
    record.estimate = replicate_values.mean();
    // Standard error of a single shot-budget measurement of the objective;
    // the replicate mean itself is tighter by 1/sqrt(replicates).
    const double var =
        (replicate_values.array() - record.estimate).square().sum() /
        static_cast<double>(budget.replicates - 1);
    record.stderr_est = std::sqrt(var);
    return record;
}

ConvergenceStudy convergence_study(const DensityMatrix& rho, const GeneratorObservable& k,
                                   const std::vector<long long>& shot_grid, int repeats,
                                   const EstimationBudget& budget, std::uint64_t seed) {
    if (shot_grid.empty()) fail("InvalidOptions", "shot grid must be nonempty");
    for (size_t i = 1; i < shot_grid.size(); ++i)
        if (shot_grid[i] <= shot_grid[i - 1])
            fail("InvalidOptions", "shot grid must be strictly ascending");
    if (repeats < 1) fail("InvalidOptions", "repeats must be >= 1");

    ConvergenceStudy study;
    study.has_stderr = repeats > 1;
    for (size_t g = 0; g < shot_grid.size(); ++g) {
        RealVector errors(repeats);
        for (int r = 0; r < repeats; ++r) {
            EstimationBudget b = budget;
            b.shots = shot_grid[g];
            const std::uint64_t run_seed =
                RngStream::derive(seed, static_cast<std::uint64_t>(g) * 1000 +
                                            static_cast<std::uint64_t>(r));
            const EstimationRecord rec = estimate_tc_w_coherence(rho, k, b, run_seed);
            errors(r) = std::abs(rec.estimate - rec.exact);
        }
        ConvergenceRow row;
        row.shots = shot_grid[g];
        row.mean_abs_error = errors.mean();
        if (repeats > 1) {
            const double var = (errors.array() - row.mean_abs_error).square().sum() /
                               static_cast<double>(repeats - 1);
            row.stderr_est = std::sqrt(var / static_cast<double>(repeats));
        }
        study.rows.push_back(row);
    }

    // Least-squares slope in log-log coordinates.
    if (study.rows.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(study.rows.size());
        for (const auto& row : study.rows) {
            const double x = std::log10(static_cast<double>(row.shots));
            const double y = std::log10(std::max(row.mean_abs_error, 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        study.slope_fit = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return study;
}

} // namespace asymcoh
