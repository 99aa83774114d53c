// test_coherence.cpp — objective, closed form, optimizer, product bases,
// permutation covariance

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asymcoh/coherence.hpp"

#include <cmath>
#include <numbers>

using namespace asymcoh;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

DensityMatrix plus_state() {
    Matrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    return DensityMatrix::validated(m, 1e-9);
}

OrthonormalBasis y_basis() {
    Matrix cols(2, 2);
    cols << kInvSqrt2, kInvSqrt2, Complex(0.0, kInvSqrt2), Complex(0.0, -kInvSqrt2);
    return OrthonormalBasis::validated(cols);
}

DensityMatrix bell_state() {
    Vector psi = Vector::Zero(4);
    psi(0) = kInvSqrt2;
    psi(3) = kInvSqrt2;
    return DensityMatrix::validated(psi * psi.adjoint(), 1e-9);
}

CoherenceOptions fast_opts(std::uint64_t seed = 0) {
    CoherenceOptions opts;
    opts.restarts = 4;
    opts.max_iters = 400;
    opts.seed = seed;
    return opts;
}

} // namespace

TEST_CASE("objective vanishes for incoherent states in any basis") {
    RngStream rng(1);
    const GeneratorObservable k = random_generator(3, rng);
    Matrix inc = Matrix::Zero(3, 3);
    const double w[3] = {0.2, 0.5, 0.3};
    for (Index i = 0; i < 3; ++i)
        inc += w[i] * k.eigenbasis().vector(i) * k.eigenbasis().vector(i).adjoint();
    const DensityMatrix rho = DensityMatrix::validated(inc, 1e-9);
    for (int trial = 0; trial < 5; ++trial) {
        const OrthonormalBasis basis =
            OrthonormalBasis::validated(haar_random_unitary(3, rng));
        CHECK(coherence_objective(rho, k, basis) <= 1e-12);
    }
}

TEST_CASE("objective reaches 1 at the optimal qubit basis and 0 at the eigenbasis") {
    CHECK(coherence_objective(plus_state(), GeneratorObservable::pauli_z(), y_basis()) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(coherence_objective(plus_state(), GeneratorObservable::pauli_z(),
                              OrthonormalBasis::standard(2)) == doctest::Approx(0.0));
}

TEST_CASE("objective equals half the commutator diagonal sum") {
    RngStream rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const Index d = 2 + static_cast<Index>(rng.uniform_index(4));
        const DensityMatrix rho = random_density_matrix(
            d, 1 + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(d))), rng);
        const GeneratorObservable k = random_generator(d, rng);
        const OrthonormalBasis basis =
            OrthonormalBasis::validated(haar_random_unitary(d, rng));
        const Matrix comm = commutator(k.matrix(), rho.matrix());
        double half_sum = 0.0;
        for (Index x = 0; x < d; ++x)
            half_sum += 0.5 * std::abs(basis.vector(x).dot(comm * basis.vector(x)));
        CHECK(std::abs(coherence_objective(rho, k, basis) - half_sum) <= 1e-12);
    }
}

TEST_CASE("closed form vanishes iff the state commutes with the generator") {
    const GeneratorObservable kz = GeneratorObservable::pauli_z();
    Matrix diag(2, 2);
    diag << 0.6, 0.0, 0.0, 0.4;
    CHECK(tc_w_coherence_exact(DensityMatrix::validated(diag, 1e-9), kz) <= 1e-15);
    CHECK(tc_w_coherence_exact(plus_state(), kz) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed form matches the two-level formula on random qubits") {
    RngStream rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const DensityMatrix rho = random_density_matrix(
            2, 1 + static_cast<Index>(rng.uniform_index(2)), rng);
        const GeneratorObservable k = random_generator(2, rng);
        const double gap = k.eigenvalues()(1) - k.eigenvalues()(0);
        const Complex off = k.eigenbasis().vector(1).dot(rho.matrix() * k.eigenbasis().vector(0));
        CHECK(std::abs(tc_w_coherence_exact(rho, k) - std::abs(gap) * std::abs(off)) <= 1e-10);
    }
}

TEST_CASE("closed form dominates a dense Bloch-angle grid and is attained on it") {
    // Aligned instance: the maximizing angles sit exactly on the grid.
    const GeneratorObservable kz = GeneratorObservable::pauli_z();
    const Index n_alpha = 200, n_beta = 200;
    auto grid_max = [&](const DensityMatrix& rho, const GeneratorObservable& k) {
        double best = 0.0;
        for (Index i = 0; i < n_alpha; ++i)
            for (Index j = 0; j < n_beta; ++j) {
                const double alpha = std::numbers::pi * static_cast<double>(i) / n_alpha;
                const double beta = 2.0 * std::numbers::pi * static_cast<double>(j) / n_beta;
                best = std::max(best, coherence_objective(rho, k, bloch_basis(alpha, beta)));
            }
        return best;
    };
    const double exact = tc_w_coherence_exact(plus_state(), kz);
    const double grid = grid_max(plus_state(), kz);
    CHECK(grid <= exact + 1e-12);
    CHECK(std::abs(grid - exact) <= 1e-4);
}

TEST_CASE("closed form dominates random basis search at d = 3") {
    RngStream rng(29);
    const DensityMatrix rho = random_density_matrix(3, 2, rng);
    const GeneratorObservable k = random_generator(3, rng);
    const double exact = tc_w_coherence_exact(rho, k);
    double best = 0.0;
    for (int trial = 0; trial < 20'000; ++trial) {
        const Matrix u = haar_random_unitary(3, rng);
        best = std::max(best, coherence_objective(rho.matrix(), k.matrix(), u));
    }
    CHECK(best <= exact + 1e-12);
    CHECK(best >= exact - 0.05 * (1.0 + exact)); // random search gets close
}

TEST_CASE("optimizer finds zero coherence for the maximally mixed state") {
    const DensityMatrix rho = DensityMatrix::validated(Matrix::Identity(3, 3) / 3.0, 1e-9);
    RngStream rng(31);
    const CoherenceResult result = tc_w_coherence(rho, random_generator(3, rng), fast_opts());
    CHECK(result.value <= 1e-10);
    CHECK(result.converged);
}

TEST_CASE("optimizer reproduces the qubit value 1") {
    const CoherenceResult result =
        tc_w_coherence(plus_state(), GeneratorObservable::pauli_z(), fast_opts());
    CHECK(std::abs(result.value - 1.0) <= 1e-7);
    CHECK(result.converged);
    CHECK(result.has_oracle);
}

TEST_CASE("optimizer matches the closed form at d = 4") {
    RngStream rng(37);
    const DensityMatrix rho = random_density_matrix(4, 3, rng);
    const GeneratorObservable k = random_generator(4, rng);
    const CoherenceResult result = tc_w_coherence(rho, k, fast_opts(5));
    CHECK(std::abs(result.value - result.oracle_value) <= 1e-6);
}

TEST_CASE("optimizer works without the warm start") {
    CoherenceOptions opts;
    opts.restarts = 8;
    opts.max_iters = 1200;
    opts.warm_start = false;
    opts.seed = 4;
    RngStream rng(43);
    const DensityMatrix rho2 = random_density_matrix(2, 2, rng);
    const GeneratorObservable k2 = random_generator(2, rng);
    const CoherenceResult r2 = tc_w_coherence(rho2, k2, opts);
    CHECK(std::abs(r2.value - r2.oracle_value) <= 1e-5);

    const DensityMatrix rho3 = random_density_matrix(3, 2, rng);
    const GeneratorObservable k3 = random_generator(3, rng);
    const CoherenceResult r3 = tc_w_coherence(rho3, k3, opts);
    CHECK(std::abs(r3.value - r3.oracle_value) <= 1e-4);
}

TEST_CASE("optimizer value is reproduced by the returned basis") {
    RngStream rng(53);
    const DensityMatrix rho = random_density_matrix(3, 3, rng);
    const GeneratorObservable k = random_generator(3, rng);
    const CoherenceResult result = tc_w_coherence(rho, k, fast_opts(9));
    CHECK(std::abs(coherence_objective(rho, k, result.argmax_basis) - result.value) <= 1e-12);
}

TEST_CASE("qubit closed form handles generic and degenerate generators") {
    const QubitCoherence plus_z = qubit_tc_w_coherence(plus_state(), GeneratorObservable::pauli_z());
    CHECK(!plus_z.degenerate);
    CHECK(plus_z.value == doctest::Approx(1.0).epsilon(1e-12));

    const QubitCoherence degenerate =
        qubit_tc_w_coherence(plus_state(), GeneratorObservable::from_diagonal({3.0, 3.0}));
    CHECK(degenerate.degenerate);
    CHECK(degenerate.value == 0.0);

    Matrix off(2, 2);
    off << 0.5, Complex(0.0, 0.3), Complex(0.0, -0.3), 0.5;
    const DensityMatrix rho = DensityMatrix::validated(off, 1e-9);
    const GeneratorObservable k = GeneratorObservable::from_diagonal({2.0, -1.0});
    const QubitCoherence generic = qubit_tc_w_coherence(rho, k);
    CHECK(generic.value == doctest::Approx(0.9).epsilon(1e-10));
    CHECK(std::abs(generic.value - tc_w_coherence_exact(rho, k)) <= 1e-10);
}

TEST_CASE("bloch_basis reproduces the named bases") {
    const OrthonormalBasis computational = bloch_basis(0.0, 0.0);
    CHECK(std::abs(computational.matrix()(0, 0) - Complex(1.0, 0.0)) <= 1e-12);
    CHECK(std::abs(computational.matrix()(1, 1) + Complex(1.0, 0.0)) <= 1e-12);

    const OrthonormalBasis hadamard = bloch_basis(std::numbers::pi / 2.0, 0.0);
    CHECK(std::abs(hadamard.matrix()(0, 0) - Complex(kInvSqrt2, 0.0)) <= 1e-12);
    CHECK(std::abs(hadamard.matrix()(1, 0) - Complex(kInvSqrt2, 0.0)) <= 1e-12);

    const OrthonormalBasis circular =
        bloch_basis(std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    CHECK(std::abs(circular.matrix()(1, 0) - Complex(0.0, kInvSqrt2)) <= 1e-12);
    CHECK(coherence_objective(plus_state(), GeneratorObservable::pauli_z(), circular) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("local generator splitting validates and rejects") {
    const Matrix local = kron(sigma_z(), Matrix::Identity(2, 2)) +
                         kron(Matrix::Identity(2, 2), sigma_x());
    const auto terms = local_generator_terms(local, {2, 2});
    REQUIRE(terms.size() == 2);
    const Matrix rebuilt = kron(terms[0], Matrix::Identity(2, 2)) +
                           kron(Matrix::Identity(2, 2), terms[1]);
    CHECK(max_abs(rebuilt - local) <= 1e-10);

    const Matrix entangling = kron(sigma_z(), sigma_z());
    CHECK_THROWS_WITH_AS(local_generator_terms(entangling, {2, 2}),
                         doctest::Contains("NotLocalGenerator"), Error);
}

TEST_CASE("local generator splitting handles three parties and trace offsets") {
    const Matrix eye2 = Matrix::Identity(2, 2);
    // Local terms with nonzero traces exercise the identity-share gauge.
    const Matrix k1 = sigma_z() + 0.7 * eye2;
    const Matrix k2 = sigma_x() - 0.3 * eye2;
    const Matrix k3 = diag_operator({0.2, 1.4});
    const Matrix total = kron(k1, kron(eye2, eye2)) + kron(eye2, kron(k2, eye2)) +
                         kron(eye2, kron(eye2, k3));
    const auto terms = local_generator_terms(total, {2, 2, 2});
    REQUIRE(terms.size() == 3);
    const Matrix rebuilt = kron(terms[0], kron(eye2, eye2)) +
                           kron(eye2, kron(terms[1], eye2)) +
                           kron(eye2, kron(eye2, terms[2]));
    CHECK(max_abs(rebuilt - total) <= 1e-10);
}

TEST_CASE("product-basis coherence of a product state matches the local value") {
    RngStream rng(61);
    const DensityMatrix rho1 = random_density_matrix(2, 1, rng);
    const DensityMatrix rho2 = random_density_matrix(2, 2, rng);
    const DensityMatrix joint =
        DensityMatrix::validated(kron(rho1.matrix(), rho2.matrix()), 1e-9);
    const GeneratorObservable k1 = random_generator(2, rng);
    const GeneratorObservable k_ext = GeneratorObservable::validated(
        kron(k1.matrix(), Matrix::Identity(2, 2)));

    CoherenceOptions opts = fast_opts(3);
    opts.restarts = 6;
    const CoherenceResult product = product_basis_coherence(joint, k_ext, {2, 2}, opts);
    const double local = tc_w_coherence(rho1, k1, fast_opts(3)).value;
    CHECK(std::abs(product.value - local) <= 2e-6);
}

TEST_CASE("product-basis coherence vanishes for locally incoherent states") {
    const GeneratorObservable k_ext = GeneratorObservable::validated(
        kron(sigma_z(), Matrix::Identity(2, 2)) + kron(Matrix::Identity(2, 2), sigma_z()));
    Matrix inc = Matrix::Zero(4, 4);
    inc(0, 0) = 0.4;
    inc(1, 1) = 0.1;
    inc(2, 2) = 0.2;
    inc(3, 3) = 0.3;
    const CoherenceResult result = product_basis_coherence(
        DensityMatrix::validated(inc, 1e-9), k_ext, {2, 2}, fast_opts());
    CHECK(result.value <= 1e-9);
}

TEST_CASE("product-basis coherence of the Bell state matches a dense product grid") {
    const GeneratorObservable k_ext = GeneratorObservable::validated(
        kron(sigma_z(), Matrix::Identity(2, 2)) + kron(Matrix::Identity(2, 2), sigma_z()));
    const DensityMatrix bell = bell_state();

    // ~1.1e6 product bases; the angle grid contains the exact maximizer.
    double grid_best = 0.0;
    const Index n_alpha = 33, n_beta = 32;
    std::vector<OrthonormalBasis> single;
    std::vector<Matrix> singles;
    for (Index i = 0; i < n_alpha; ++i)
        for (Index j = 0; j < n_beta; ++j) {
            const double alpha = std::numbers::pi * static_cast<double>(i) / (n_alpha - 1);
            const double beta = 2.0 * std::numbers::pi * static_cast<double>(j) / n_beta;
            singles.push_back(bloch_basis(alpha, beta).matrix());
        }
    const Matrix a = k_ext.matrix() * bell.matrix();
    for (const Matrix& b1 : singles)
        for (const Matrix& b2 : singles) {
            const Matrix basis = kron(b1, b2);
            double value = 0.0;
            for (Index x = 0; x < 4; ++x)
                value += std::abs(basis.col(x).dot(a * basis.col(x)).imag());
            grid_best = std::max(grid_best, value);
        }

    CoherenceOptions opts = fast_opts(7);
    opts.restarts = 8;
    const CoherenceResult result = product_basis_coherence(bell, k_ext, {2, 2}, opts);
    CHECK(std::abs(result.value - grid_best) <= 1e-3);
    // For this state the product supremum reaches the full supremum 2.
    CHECK(grid_best == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("product-mode value never exceeds the full supremum") {
    RngStream rng(67);
    for (int trial = 0; trial < 5; ++trial) {
        const DensityMatrix rho = random_density_matrix(4, 2, rng);
        const GeneratorObservable k1 = random_generator(2, rng);
        const GeneratorObservable k2 = random_generator(2, rng);
        const GeneratorObservable k_ext = GeneratorObservable::validated(
            kron(k1.matrix(), Matrix::Identity(2, 2)) +
            kron(Matrix::Identity(2, 2), k2.matrix()));
        const CoherenceResult product =
            product_basis_coherence(rho, k_ext, {2, 2}, fast_opts(trial));
        CHECK(product.value <= tc_w_coherence_exact(rho, k_ext) + 1e-8);
    }
}

TEST_CASE("normalized coherence is scale-invariant") {
    const double base =
        normalized_tc_w_coherence(plus_state(), GeneratorObservable::pauli_z(), fast_opts());
    CHECK(base == doctest::Approx(1.0).epsilon(1e-7));
    const GeneratorObservable scaled = GeneratorObservable::validated(5.0 * sigma_z());
    CHECK(normalized_tc_w_coherence(plus_state(), scaled, fast_opts()) ==
          doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("normalized coherence agrees with the rescaled-generator path") {
    RngStream rng(73);
    for (int trial = 0; trial < 10; ++trial) {
        const Index d = 2 + static_cast<Index>(rng.uniform_index(3));
        const DensityMatrix rho = random_density_matrix(d, d, rng);
        const GeneratorObservable k = random_generator(d, rng);
        const double direct = normalized_tc_w_coherence_exact(rho, k);
        const double rescaled =
            tc_w_coherence_exact(rho, GeneratorObservable::validated(k.normalized()));
        CHECK(std::abs(direct - rescaled) <= 1e-9);
    }
    CHECK_THROWS_WITH_AS(
        normalized_tc_w_coherence(plus_state(),
                                  GeneratorObservable::validated(Matrix::Zero(2, 2)),
                                  fast_opts()),
        doctest::Contains("ZeroGenerator"), Error);
}

TEST_CASE("identity permutation with zero phases changes nothing") {
    RngStream rng(79);
    const DensityMatrix rho = random_density_matrix(3, 2, rng);
    const GeneratorObservable k = random_generator(3, rng);
    const PermutationCheck check =
        permutation_covariance_check(rho, k, {0, 1, 2}, {0.0, 0.0, 0.0});
    CHECK(check.equal);
    CHECK(!check.witness);
    CHECK(check.lhs == doctest::Approx(check.reference).epsilon(1e-10));
}

TEST_CASE("two-level coherence is permutation invariant") {
    RngStream rng(83);
    for (int trial = 0; trial < 25; ++trial) {
        const DensityMatrix rho = random_density_matrix(
            2, 1 + static_cast<Index>(rng.uniform_index(2)), rng);
        const GeneratorObservable k = random_generator(2, rng);
        const std::vector<double> phases{2.0 * std::numbers::pi * rng.uniform(),
                                         2.0 * std::numbers::pi * rng.uniform()};
        const PermutationCheck check =
            permutation_covariance_check(rho, k, {1, 0}, phases);
        CHECK(check.equal);
        CHECK(!check.witness);
    }
}

TEST_CASE("permutation covariance identity holds at d = 3") {
    // Swapping the extreme eigenvalues of an equispaced spectrum is an affine
    // relabeling (K -> 2I - K), so it can never witness non-invariance; the
    // covariance identity lhs == rhs still holds.
    RngStream rng(89);
    const GeneratorObservable k = GeneratorObservable::from_diagonal({0.0, 1.0, 2.0});
    for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix rho = random_density_matrix(3, 3, rng);
        const std::vector<double> phases{2.0 * std::numbers::pi * rng.uniform(),
                                         2.0 * std::numbers::pi * rng.uniform(),
                                         2.0 * std::numbers::pi * rng.uniform()};
        const PermutationCheck affine =
            permutation_covariance_check(rho, k, {2, 1, 0}, phases);
        CHECK(affine.equal);
        CHECK(!affine.witness);
    }
}

TEST_CASE("a non-affine permutation witnesses non-invariance at d = 3") {
    RngStream rng(97);
    const GeneratorObservable k = GeneratorObservable::from_diagonal({0.0, 1.0, 2.0});
    bool found = false;
    for (int trial = 0; trial < 50 && !found; ++trial) {
        const DensityMatrix rho = random_density_matrix(3, 3, rng);
        const PermutationCheck check =
            permutation_covariance_check(rho, k, {1, 0, 2}, {0.0, 0.0, 0.0});
        CHECK(check.equal); // the identity always holds
        found = check.witness;
    }
    CHECK(found);
}

TEST_CASE("permutation check validates its inputs") {
    RngStream rng(101);
    const DensityMatrix rho = random_density_matrix(3, 3, rng);
    const GeneratorObservable k = random_generator(3, rng);
    CHECK_THROWS_WITH_AS(permutation_covariance_check(rho, k, {0, 0, 2}, {0.0, 0.0, 0.0}),
                         doctest::Contains("InvalidPermutation"), Error);
}

TEST_CASE("faithfulness holds in both directions") {
    RngStream rng(103);
    for (int trial = 0; trial < 25; ++trial) {
        const Index d = 2 + static_cast<Index>(rng.uniform_index(3));
        const GeneratorObservable k = random_generator(d, rng);
        // Incoherent mixtures carry no coherence.
        Matrix inc = Matrix::Zero(d, d);
        double total = 0.0;
        RealVector w(d);
        for (Index i = 0; i < d; ++i) {
            w(i) = rng.uniform() + 1e-3;
            total += w(i);
        }
        for (Index i = 0; i < d; ++i)
            inc += (w(i) / total) * k.eigenbasis().vector(i) * k.eigenbasis().vector(i).adjoint();
        CHECK(tc_w_coherence_exact(inc, k.matrix()) <= 1e-9);

        // Perturbed states do: the closed form dominates the largest
        // commutator entry.
        const DensityMatrix rho = random_density_matrix(d, d, rng);
        const Matrix m = Complex(0.0, -1.0) * commutator(k.matrix(), rho.matrix());
        if (max_abs(m) > 1e-9)
            CHECK(tc_w_coherence_exact(rho, k) + 1e-12 >= 0.5 * max_abs(m));
    }
}

TEST_CASE("coherence is convex under mixing") {
    RngStream rng(107);
    for (int trial = 0; trial < 50; ++trial) {
        const Index d = 2 + static_cast<Index>(rng.uniform_index(3));
        const GeneratorObservable k = random_generator(d, rng);
        const double p = rng.uniform();
        const DensityMatrix a = random_density_matrix(d, d, rng);
        const DensityMatrix b = random_density_matrix(d, 1, rng);
        const Matrix mix = p * a.matrix() + (1.0 - p) * b.matrix();
        const double lhs = tc_w_coherence_exact(mix, k.matrix());
        const double rhs =
            p * tc_w_coherence_exact(a, k) + (1.0 - p) * tc_w_coherence_exact(b, k);
        CHECK(lhs <= rhs + 1e-8);
    }
}

TEST_CASE("coherence is invariant under joint unitary conjugation") {
    RngStream rng(109);
    for (int trial = 0; trial < 25; ++trial) {
        const Index d = 2 + static_cast<Index>(rng.uniform_index(3));
        const DensityMatrix rho = random_density_matrix(d, d, rng);
        const GeneratorObservable k = random_generator(d, rng);
        const Matrix v = haar_random_unitary(d, rng);
        const double before = tc_w_coherence_exact(rho, k);
        const double after = tc_w_coherence_exact(v * rho.matrix() * v.adjoint(),
                                                  v * k.matrix() * v.adjoint());
        CHECK(std::abs(before - after) <= 1e-8);
    }
}

TEST_CASE("coherence scales linearly with the generator") {
    RngStream rng(113);
    for (int trial = 0; trial < 25; ++trial) {
        const Index d = 2 + static_cast<Index>(rng.uniform_index(3));
        const DensityMatrix rho = random_density_matrix(d, d, rng);
        const GeneratorObservable k = random_generator(d, rng);
        const double c = 4.0 * rng.uniform() - 2.0;
        const double scaled = tc_w_coherence_exact(rho.matrix(), c * k.matrix());
        CHECK(std::abs(scaled - std::abs(c) * tc_w_coherence_exact(rho, k)) <= 1e-9);
    }
}

TEST_CASE("degenerate generators are handled without a nondegeneracy assumption") {
    RngStream rng(131);
    const GeneratorObservable k = GeneratorObservable::from_diagonal({1.0, 1.0, 2.0});
    for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix rho = random_density_matrix(3, 3, rng);
        const CoherenceResult result = tc_w_coherence(rho, k, fast_opts(trial));
        CHECK(std::abs(result.value - result.oracle_value) <= 1e-6);
        // States mixed over the degenerate eigenspace stay coherence-free
        // even when they are not diagonal.
        Matrix block = Matrix::Zero(3, 3);
        block(0, 0) = 0.3;
        block(1, 1) = 0.3;
        block(0, 1) = Complex(0.1, 0.2);
        block(1, 0) = Complex(0.1, -0.2);
        block(2, 2) = 0.4;
        CHECK(tc_w_coherence_exact(DensityMatrix::validated(block, 1e-9), k) <= 1e-12);
    }
}

TEST_CASE("optimizer tracks the closed form across dimensions") {
    RngStream rng(127);
    for (int trial = 0; trial < 40; ++trial) {
        const Index d = 2 + static_cast<Index>(rng.uniform_index(4));
        const DensityMatrix rho = random_density_matrix(
            d, 1 + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(d))), rng);
        const GeneratorObservable k = random_generator(d, rng);
        const CoherenceResult result = tc_w_coherence(rho, k, fast_opts(trial));
        CHECK(std::abs(result.value - result.oracle_value) <= 1e-6);
    }
}
