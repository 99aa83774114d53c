// coherence.cpp

#include "asymcoh/coherence.hpp"

#include "asymcoh/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace asymcoh {

namespace {

void require_dim(Index a, Index b, const char* who) {
    if (a != b)
        fail("DimensionMismatch",
             std::string(who) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

} // namespace

// ------------------------------------------------------------ Nelder-Mead

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&, int)>& f,
                             const Eigen::VectorXd& x0, const NelderMeadOptions& opts) {
    const Index n = x0.size();
    NelderMeadResult result;

    std::vector<Eigen::VectorXd> xs(static_cast<size_t>(n) + 1, x0);
    std::vector<double> fs(static_cast<size_t>(n) + 1);
    long long evals = 0;
    int epoch = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return f(x, epoch);
    };

    for (Index i = 0; i < n; ++i) xs[static_cast<size_t>(i) + 1](i) += opts.init_step;
    for (size_t i = 0; i < xs.size(); ++i) fs[i] = eval(xs[i]);

    std::vector<size_t> order(xs.size());
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return fs[a] < fs[b]; });
    };

    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
    int iter = 0;
    bool converged = false;
    for (; iter < opts.max_iters; ++iter) {
        epoch = iter + 1;
        if (opts.reevaluate_each_epoch)
            for (size_t i = 0; i < xs.size(); ++i) fs[i] = eval(xs[i]);
        sort_simplex();
        if (opts.f_tol > 0.0 && fs[order.back()] - fs[order.front()] <= opts.f_tol) {
            converged = true;
            break;
        }
        if (opts.x_tol > 0.0) {
            double diameter = 0.0;
            for (size_t i = 1; i < order.size(); ++i)
                diameter = std::max(diameter, (xs[order[i]] - xs[order[0]]).norm());
            if (diameter <= opts.x_tol) {
                converged = true;
                break;
            }
        }

        const size_t worst = order.back();
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (size_t i = 0; i < order.size() - 1; ++i) centroid += xs[order[i]];
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd reflected = centroid + kReflect * (centroid - xs[worst]);
        const double f_reflected = eval(reflected);

        if (f_reflected < fs[order.front()]) {
            const Eigen::VectorXd expanded = centroid + kExpand * (reflected - centroid);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                xs[worst] = expanded;
                fs[worst] = f_expanded;
            } else {
                xs[worst] = reflected;
                fs[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < fs[order[order.size() - 2]]) {
            xs[worst] = reflected;
            fs[worst] = f_reflected;
            continue;
        }
        // Contract toward the better of (worst, reflected).
        const bool outside = f_reflected < fs[worst];
        const Eigen::VectorXd toward = outside ? reflected : xs[worst];
        const Eigen::VectorXd contracted = centroid + kContract * (toward - centroid);
        const double f_contracted = eval(contracted);
        if (f_contracted < std::min(f_reflected, fs[worst])) {
            xs[worst] = contracted;
            fs[worst] = f_contracted;
            continue;
        }
        // Shrink toward the best vertex.
        const size_t best = order.front();
        for (size_t i = 0; i < xs.size(); ++i) {
            if (i == best) continue;
            xs[i] = xs[best] + kShrink * (xs[i] - xs[best]);
            fs[i] = eval(xs[i]);
        }
    }

    sort_simplex();
    result.x = xs[order.front()];
    result.f = fs[order.front()];
    result.iterations = iter;
    result.evaluations = evals;
    result.converged = converged;
    return result;
}

// --------------------------------------------------- basis parameterization

Matrix BasisParam::hermitian(const Eigen::VectorXd& lambda, Index d) {
    if (lambda.size() != param_count(d))
        fail("DimensionMismatch", "basis parameter vector must have length d^2");
    Matrix h = Matrix::Zero(d, d);
    for (Index i = 0; i < d; ++i) h(i, i) = lambda(i);
    Index p = d;
    for (Index i = 0; i < d; ++i)
        for (Index j = i + 1; j < d; ++j) {
            h(i, j) = Complex(lambda(p), lambda(p + 1));
            h(j, i) = std::conj(h(i, j));
            p += 2;
        }
    return h;
}

Matrix BasisParam::unitary(const Eigen::VectorXd& lambda, Index d) {
    const Matrix h = hermitian(lambda, d);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    Vector phases(d);
    for (Index i = 0; i < d; ++i)
        phases(i) = std::exp(Complex(0.0, solver.eigenvalues()(i)));
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

OrthonormalBasis bloch_basis(double alpha, double beta) {
    const double c = std::cos(alpha / 2.0), s = std::sin(alpha / 2.0);
    const Complex phase = std::exp(Complex(0.0, beta));
    Matrix cols(2, 2);
    cols(0, 0) = c;
    cols(1, 0) = s * phase;
    cols(0, 1) = s;
    cols(1, 1) = -c * phase;
    return OrthonormalBasis::validated(cols);
}

// ----------------------------------------------------------------- objective

double coherence_objective(const Matrix& state, const Matrix& k, const Matrix& basis_cols) {
    require_dim(state.rows(), k.rows(), "coherence_objective");
    require_dim(state.rows(), basis_cols.rows(), "coherence_objective");
    const Matrix a = k * state;
    const Matrix ab = a * basis_cols;
    double total = 0.0;
    for (Index x = 0; x < basis_cols.cols(); ++x)
        total += std::abs(basis_cols.col(x).dot(ab.col(x)).imag());
    return total;
}

double coherence_objective(const DensityMatrix& rho, const GeneratorObservable& k,
                           const OrthonormalBasis& basis) {
    return coherence_objective(rho.matrix(), k.matrix(), basis.matrix());
}

double tc_w_coherence_exact(const Matrix& state, const Matrix& k) {
    require_dim(state.rows(), k.rows(), "tc_w_coherence_exact");
    const Matrix m = Complex(0.0, -1.0) * commutator(k, state);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double tc_w_coherence_exact(const DensityMatrix& rho, const GeneratorObservable& k) {
    return tc_w_coherence_exact(rho.matrix(), k.matrix());
}

OrthonormalBasis coherence_argmax_basis(const Matrix& state, const Matrix& k) {
    const Matrix m = Complex(0.0, -1.0) * commutator(k, state);
    return OrthonormalBasis::validated(hermitian_eigensystem(m).vectors);
}

// ----------------------------------------------------------------- optimizer

namespace {

struct RestartOutcome {
    double best = -1.0;
    Matrix best_basis;
    int iterations = 0;
    long long evaluations = 0;
};

// One simplex run in the frame `frame`: evaluated bases are frame * U(lambda).
RestartOutcome run_restart(const Matrix& state, const Matrix& k, const Matrix& frame,
                           Index param_dim, Index d, const CoherenceOptions& opts) {
    RestartOutcome out;
    out.best_basis = frame;
    auto objective = [&](const Eigen::VectorXd& lambda, int) {
        const Matrix basis = frame * BasisParam::unitary(lambda, d);
        const double value = coherence_objective(state, k, basis);
        if (value > out.best) {
            out.best = value;
            out.best_basis = basis;
        }
        return -value;
    };
    NelderMeadOptions nm;
    nm.max_iters = opts.max_iters;
    nm.f_tol = opts.tol;
    const NelderMeadResult r =
        nelder_mead(objective, Eigen::VectorXd::Zero(param_dim), nm);
    out.iterations = r.iterations;
    out.evaluations = r.evaluations;
    return out;
}

CoherenceResult optimize_over_frames(const Matrix& state, const Matrix& k,
                                     const std::vector<Matrix>& frames, Index param_dim, Index d,
                                     const CoherenceOptions& opts) {
    std::vector<RestartOutcome> outcomes(frames.size());
    parallel_for(static_cast<long long>(frames.size()), [&](long long r) {
        outcomes[static_cast<size_t>(r)] =
            run_restart(state, k, frames[static_cast<size_t>(r)], param_dim, d, opts);
    });

    CoherenceResult result;
    result.seed = opts.seed;
    result.restarts_run = static_cast<int>(frames.size());
    result.value = -1.0;
    Matrix best_basis;
    for (const auto& out : outcomes) { // deterministic: first restart wins ties
        result.evaluations += out.evaluations;
        result.iterations = std::max(result.iterations, out.iterations);
        if (out.best > result.value) {
            result.value = out.best;
            best_basis = out.best_basis;
        }
    }
    result.argmax_basis = OrthonormalBasis::validated(best_basis);
    return result;
}

} // namespace

CoherenceResult tc_w_coherence(const DensityMatrix& rho, const GeneratorObservable& k,
                               const CoherenceOptions& opts) {
    require_dim(rho.dim(), k.dim(), "tc_w_coherence");
    if (opts.restarts < 1) fail("InvalidOptions", "restarts must be >= 1");
    if (!(opts.tol > 0.0)) fail("InvalidOptions", "tol must be positive");
    const Index d = rho.dim();

    std::vector<Matrix> frames;
    frames.reserve(static_cast<size_t>(opts.restarts));
    if (opts.warm_start)
        frames.push_back(coherence_argmax_basis(rho.matrix(), k.matrix()).matrix());
    for (Index r = static_cast<Index>(frames.size()); r < opts.restarts; ++r) {
        RngStream rng(opts.seed, static_cast<std::uint64_t>(r));
        frames.push_back(haar_random_unitary(d, rng));
    }

    CoherenceResult result =
        optimize_over_frames(rho.matrix(), k.matrix(), frames, BasisParam::param_count(d), d, opts);
    result.oracle_value = tc_w_coherence_exact(rho, k);
    result.has_oracle = true;
    result.gap = std::abs(result.value - result.oracle_value);
    result.converged = result.gap <= 100.0 * opts.tol;
    return result;
}

QubitCoherence qubit_tc_w_coherence(const DensityMatrix& rho, const GeneratorObservable& k) {
    if (rho.dim() != 2 || k.dim() != 2)
        fail("DimensionMismatch", "qubit_tc_w_coherence requires d = 2");
    const double gap = k.eigenvalues()(1) - k.eigenvalues()(0);
    if (std::abs(gap) <= 1e-10) return {0.0, true}; // degenerate generator
    const Vector lo = k.eigenbasis().vector(0);
    const Vector hi = k.eigenbasis().vector(1);
    const Complex off = hi.dot(rho.matrix() * lo); // <k_+|rho|k_->
    return {std::abs(gap) * std::abs(off), false};
}

double normalized_tc_w_coherence(const DensityMatrix& rho, const GeneratorObservable& k,
                                 const CoherenceOptions& opts) {
    if (k.spectral_radius() <= 0.0) fail("ZeroGenerator", "spectral radius is zero");
    return tc_w_coherence(rho, k, opts).value / k.spectral_radius();
}

double normalized_tc_w_coherence_exact(const Matrix& state, const GeneratorObservable& k) {
    if (k.spectral_radius() <= 0.0) fail("ZeroGenerator", "spectral radius is zero");
    return tc_w_coherence_exact(state, k.matrix()) / k.spectral_radius();
}

double normalized_tc_w_coherence_exact(const DensityMatrix& rho, const GeneratorObservable& k) {
    return normalized_tc_w_coherence_exact(rho.matrix(), k);
}

// ------------------------------------------------------------- product bases

std::vector<Matrix> local_generator_terms(const Matrix& k, const std::vector<Index>& dims) {
    if (dims.size() < 2) fail("InvalidDims", "need at least two subsystems");
    Index total = 1;
    for (Index d : dims) total *= d;
    require_dim(k.rows(), total, "local_generator_terms");
    const Index n = static_cast<Index>(dims.size());
    const double trace_share = (k.trace().real() / static_cast<double>(total)) *
                               (static_cast<double>(n) - 1.0) / static_cast<double>(n);

    // Partial-trace K onto each subsystem, then remove the identity component
    // over-counted by the other factors.
    std::vector<Matrix> terms;
    Matrix rebuilt = Matrix::Zero(total, total);
    for (Index i = 0; i < n; ++i) {
        Index left = 1, right = 1;
        for (Index j = 0; j < i; ++j) left *= dims[static_cast<size_t>(j)];
        for (Index j = i + 1; j < n; ++j) right *= dims[static_cast<size_t>(j)];
        const Index di = dims[static_cast<size_t>(i)];
        // Fold the left factors away, then the right ones.
        Matrix mid = partial_trace_matrix(k, left, di * right, 2);
        Matrix local = partial_trace_matrix(mid, di, right, 1);
        local /= static_cast<double>(left * right);
        local -= trace_share * Matrix::Identity(di, di);
        Matrix embedded = kron(Matrix::Identity(left, left), kron(local, Matrix::Identity(right, right)));
        rebuilt += embedded;
        terms.push_back(std::move(local));
    }
    const double err = max_abs(rebuilt - k);
    if (err > 1e-10 * (1.0 + max_abs(k)))
        fail("NotLocalGenerator", "sum of one-site embeddings misses K by " + std::to_string(err));
    return terms;
}

CoherenceResult product_basis_coherence(const DensityMatrix& rho, const GeneratorObservable& k,
                                        const std::vector<Index>& dims,
                                        const CoherenceOptions& opts) {
    Index total = 1;
    for (Index d : dims) total *= d;
    require_dim(rho.dim(), total, "product_basis_coherence");
    require_dim(k.dim(), total, "product_basis_coherence");
    local_generator_terms(k.matrix(), dims); // validates locality

    const Index n = static_cast<Index>(dims.size());
    Index param_dim = 0;
    for (Index d : dims) param_dim += BasisParam::param_count(d);

    struct RestartOutcome {
        double best = -1.0;
        Matrix best_basis;
        int iterations = 0;
        long long evaluations = 0;
    };
    std::vector<RestartOutcome> outcomes(static_cast<size_t>(opts.restarts));

    parallel_for(opts.restarts, [&](long long r) {
        RngStream rng(opts.seed, static_cast<std::uint64_t>(r) + 0x70000000ULL);
        std::vector<Matrix> frames;
        for (Index i = 0; i < n; ++i)
            frames.push_back(haar_random_unitary(dims[static_cast<size_t>(i)], rng));

        auto& out = outcomes[static_cast<size_t>(r)];
        auto objective = [&](const Eigen::VectorXd& lambda, int) {
            Matrix basis(1, 1);
            basis(0, 0) = 1.0;
            Index offset = 0;
            for (Index i = 0; i < n; ++i) {
                const Index di = dims[static_cast<size_t>(i)];
                const Index np = BasisParam::param_count(di);
                const Matrix ui = frames[static_cast<size_t>(i)] *
                                  BasisParam::unitary(lambda.segment(offset, np), di);
                basis = kron(basis, ui);
                offset += np;
            }
            const double value = coherence_objective(rho.matrix(), k.matrix(), basis);
            if (value > out.best) {
                out.best = value;
                out.best_basis = basis;
            }
            return -value;
        };
        NelderMeadOptions nm;
        nm.max_iters = opts.max_iters;
        nm.f_tol = opts.tol;
        const NelderMeadResult res =
            nelder_mead(objective, Eigen::VectorXd::Zero(param_dim), nm);
        out.iterations = res.iterations;
        out.evaluations = res.evaluations;
    });

    CoherenceResult result;
    result.seed = opts.seed;
    result.restarts_run = opts.restarts;
    result.value = -1.0;
    Matrix best_basis;
    for (const auto& out : outcomes) {
        result.evaluations += out.evaluations;
        result.iterations = std::max(result.iterations, out.iterations);
        if (out.best > result.value) {
            result.value = out.best;
            best_basis = out.best_basis;
        }
    }
    result.argmax_basis = OrthonormalBasis::validated(best_basis);
    result.has_oracle = false;
    result.oracle_value = 0.0;
    result.gap = 0.0;
    result.converged = true; // no oracle; convergence judged by the caller
    return result;
}

// --------------------------------------------------- permutation covariance

PermutationCheck permutation_covariance_check(const DensityMatrix& rho,
                                              const GeneratorObservable& k,
                                              const std::vector<Index>& perm,
                                              const std::vector<double>& phases) {
    const Index d = rho.dim();
    require_dim(k.dim(), d, "permutation_covariance_check");
    if (static_cast<Index>(perm.size()) != d || static_cast<Index>(phases.size()) != d)
        fail("InvalidPermutation", "permutation and phases must have length d");
    std::vector<bool> seen(static_cast<size_t>(d), false);
    for (Index v : perm) {
        if (v < 0 || v >= d || seen[static_cast<size_t>(v)])
            fail("InvalidPermutation", "indices must form a bijection on 0..d-1");
        seen[static_cast<size_t>(v)] = true;
    }

    const Matrix& w = k.eigenbasis().matrix();
    Matrix vp = Matrix::Zero(d, d);
    for (Index i = 0; i < d; ++i)
        vp += std::exp(Complex(0.0, phases[static_cast<size_t>(i)])) *
              w.col(perm[static_cast<size_t>(i)]) * w.col(i).adjoint();

    const Matrix rho_p = vp * rho.matrix() * vp.adjoint();
    const Matrix k_p = vp.adjoint() * k.matrix() * vp;

    PermutationCheck check;
    check.lhs = tc_w_coherence_exact(rho_p, k.matrix());
    check.rhs = tc_w_coherence_exact(rho.matrix(), k_p);
    check.reference = tc_w_coherence_exact(rho.matrix(), k.matrix());
    check.equal = std::abs(check.lhs - check.rhs) <= 1e-6;
    check.witness = std::abs(check.lhs - check.reference) > 1e-6;
    return check;
}

} // namespace asymcoh
