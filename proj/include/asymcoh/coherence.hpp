// coherence.hpp — the TC w-coherence functional, its trace-norm closed form,
// basis parameterizations, and the multi-restart simplex optimizer.
//
// The objective over an orthonormal basis {|x>} is
//   f(rho, K; {x}) = sum_x |Im <x|K rho|x>| = (1/2) sum_x |<x|[K, rho]|x>|.
// Writing M = -i[K, rho] (Hermitian), the diagonal of M in any orthonormal
// basis is majorized by the spectrum of M, and v -> sum |v_i| is
// Schur-convex, so
//   sup_{bases} f = (1/2) sum_i |eig_i(M)|,
// half the trace norm of the commutator, attained at the eigenbasis of M.
// tc_w_coherence runs the derivative-free optimizer and cross-checks this
// closed form on every call; the closed form itself is validated against a
// dense Bloch-angle grid at d = 2 and random basis search at d = 3 in the
// test suite.

#pragma once

#include "core.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace asymcoh {

// ------------------------------------------------------------ Nelder-Mead

struct NelderMeadOptions {
    int max_iters = 2000;
    double f_tol = 1e-10; // stop when the simplex value spread falls below (> 0 enables)
    double x_tol = 0.0;   // stop when the simplex diameter falls below (> 0 enables)
    double init_step = 0.35;
    // Re-measure every vertex under the current epoch's random numbers so all
    // comparisons within a step share their noise; for stochastic objectives
    // this keeps accept/reject decisions reliable near the optimum.
    bool reevaluate_each_epoch = false;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int iterations = 0;
    long long evaluations = 0;
    bool converged = false;
};

// Minimizes f. The second argument is an evaluation epoch that increments
// once per simplex iteration; stochastic objectives can key common random
// numbers on it so candidates compared within one step share their noise.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&, int)>& f,
                             const Eigen::VectorXd& x0, const NelderMeadOptions& opts);

// --------------------------------------------------- basis parameterization

// Full mode: lambda (length d^2) -> Hermitian H(lambda) with diagonal
// lambda_0..lambda_{d-1} and upper-triangle entries taken as (re, im) pairs
// from the remainder; the basis is the column set of exp(i H(lambda)).
struct BasisParam {
    static Index param_count(Index d) { return d * d; }
    static Matrix hermitian(const Eigen::VectorXd& lambda, Index d);
    static Matrix unitary(const Eigen::VectorXd& lambda, Index d); // exp(i H)
};

// Bloch-angle basis for d = 2:
//   { cos(a/2)|0> + sin(a/2) e^{ib}|1>,  sin(a/2)|0> - cos(a/2) e^{ib}|1> }.
OrthonormalBasis bloch_basis(double alpha, double beta);

// ----------------------------------------------------------------- objective

// sum_x |Im <x|K state|x>|. The Matrix overloads accept any positive
// operator in place of a normalized state (channel outputs may be
// subnormalized).
double coherence_objective(const Matrix& state, const Matrix& k, const Matrix& basis_cols);
double coherence_objective(const DensityMatrix& rho, const GeneratorObservable& k,
                           const OrthonormalBasis& basis);

// Closed form (1/2) sum |eig(-i[K, state])| for the supremum over bases.
double tc_w_coherence_exact(const Matrix& state, const Matrix& k);
double tc_w_coherence_exact(const DensityMatrix& rho, const GeneratorObservable& k);

// Eigenbasis of -i[K, rho]: the basis attaining the supremum.
OrthonormalBasis coherence_argmax_basis(const Matrix& state, const Matrix& k);

// ----------------------------------------------------------------- optimizer

struct CoherenceOptions {
    int restarts = 16;
    int max_iters = 2000;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    bool warm_start = true; // include the commutator eigenbasis as restart 0
};

struct CoherenceResult {
    double value = 0.0;              // best objective seen anywhere in the run
    OrthonormalBasis argmax_basis;   // basis achieving `value`
    double oracle_value = 0.0;       // closed-form supremum (full mode only)
    bool has_oracle = false;
    double gap = 0.0;                // |value - oracle_value| when present
    int restarts_run = 0;
    int iterations = 0;              // worst per-restart iteration count
    long long evaluations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
};

// Multi-restart simplex search over the full basis manifold; the returned
// value is monotone best-so-far over every basis evaluated.
CoherenceResult tc_w_coherence(const DensityMatrix& rho, const GeneratorObservable& k,
                               const CoherenceOptions& opts = {});

// |k_+ - k_-| |<k_+|rho|k_->| for d = 2; 0 when the generator is degenerate
// (gap at or below 1e-10).
struct QubitCoherence {
    double value = 0.0;
    bool degenerate = false;
};
QubitCoherence qubit_tc_w_coherence(const DensityMatrix& rho, const GeneratorObservable& k);

// tc_w_coherence value divided by the spectral radius; throws ZeroGenerator.
double normalized_tc_w_coherence(const DensityMatrix& rho, const GeneratorObservable& k,
                                 const CoherenceOptions& opts = {});
double normalized_tc_w_coherence_exact(const DensityMatrix& rho, const GeneratorObservable& k);
double normalized_tc_w_coherence_exact(const Matrix& state, const GeneratorObservable& k);

// ------------------------------------------------------------- product bases

// Splits K into one local term per subsystem (gauge: traceless split of the
// identity component) and verifies the embeddings rebuild K; throws
// NotLocalGenerator otherwise.
std::vector<Matrix> local_generator_terms(const Matrix& k, const std::vector<Index>& dims);

// Optimizes the objective over product bases only. No closed form exists for
// this constrained supremum, so the result carries no oracle value; it is
// bounded above by the full-basis supremum.
CoherenceResult product_basis_coherence(const DensityMatrix& rho, const GeneratorObservable& k,
                                        const std::vector<Index>& dims,
                                        const CoherenceOptions& opts = {});

// --------------------------------------------------- permutation covariance

struct PermutationCheck {
    double lhs = 0.0;       // C_w(V_p rho V_p^dag; K)
    double rhs = 0.0;       // C_w(rho; V_p^dag K V_p)
    bool equal = false;     // |lhs - rhs| <= 1e-6
    double reference = 0.0; // C_w(rho; K)
    bool witness = false;   // |lhs - reference| > 1e-6
};

// V_p = sum_k e^{i phase_k} |w_{perm(k)}><w_k| over the eigenbasis {w} of K.
PermutationCheck permutation_covariance_check(const DensityMatrix& rho,
                                              const GeneratorObservable& k,
                                              const std::vector<Index>& perm,
                                              const std::vector<double>& phases);

} // namespace asymcoh
