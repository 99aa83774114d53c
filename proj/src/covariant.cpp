// covariant.cpp

#include "asymcoh/covariant.hpp"

#include "asymcoh/coherence.hpp"
#include "asymcoh/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace asymcoh {

namespace {

void require_dim(Index a, Index b, const char* who) {
    if (a != b)
        fail("DimensionMismatch",
             std::string(who) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

} // namespace

Matrix translation_unitary(const GeneratorObservable& k, double theta) {
    const Matrix& w = k.eigenbasis().matrix();
    Vector phases(k.dim());
    for (Index i = 0; i < k.dim(); ++i)
        phases(i) = std::exp(Complex(0.0, -k.eigenvalues()(i) * theta));
    return w * phases.asDiagonal() * w.adjoint();
}

Matrix random_covariant_unitary(const GeneratorObservable& k, RngStream& rng) {
    const Matrix& w = k.eigenbasis().matrix();
    Matrix block = Matrix::Zero(k.dim(), k.dim());
    for (const auto& [lo, hi] : k.degenerate_groups()) {
        const Index size = hi - lo;
        block.block(lo, lo, size, size) = haar_random_unitary(size, rng);
    }
    return w * block * w.adjoint();
}

CovariantChannel CovariantChannel::validated(GeneratorObservable k_s, GeneratorObservable k_a,
                                             DensityMatrix rho_a, Matrix e_a, Matrix v_sa) {
    require_dim(k_a.dim(), rho_a.dim(), "CovariantChannel");
    require_dim(k_a.dim(), e_a.rows(), "CovariantChannel");
    require_dim(k_s.dim() * k_a.dim(), v_sa.rows(), "CovariantChannel");

    const double ancilla_comm = max_abs(commutator(rho_a.matrix(), k_a.matrix()));
    if (ancilla_comm > 1e-10)
        fail("NotIncoherentAncilla", "[rho_a, K_a] deviation " + std::to_string(ancilla_comm));
    const double effect_comm = max_abs(commutator(e_a, k_a.matrix()));
    if (effect_comm > 1e-10)
        fail("NotIncoherentEffect", "[E_a, K_a] deviation " + std::to_string(effect_comm));

    Eigen::SelfAdjointEigenSolver<Matrix> effect_eig((e_a + e_a.adjoint()) / 2.0,
                                                     Eigen::EigenvaluesOnly);
    const double lo = effect_eig.eigenvalues().minCoeff();
    const double hi = effect_eig.eigenvalues().maxCoeff();
    if (lo < -1e-10 || hi > 1.0 + 1e-10)
        fail("InvalidEffect", "effect eigenvalues in [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");

    const Matrix total = kron(k_s.matrix(), Matrix::Identity(k_a.dim(), k_a.dim())) +
                         kron(Matrix::Identity(k_s.dim(), k_s.dim()), k_a.matrix());
    const double unitary_dev =
        max_abs(v_sa.adjoint() * v_sa - Matrix::Identity(v_sa.rows(), v_sa.cols()));
    if (unitary_dev > 1e-9)
        fail("NotUnitary", "V_sa unitarity deviation " + std::to_string(unitary_dev));
    const double covariance_dev = max_abs(commutator(v_sa, total));
    if (covariance_dev > 1e-9)
        fail("NotCovariant", "[V_sa, K_total] deviation " + std::to_string(covariance_dev));

    return CovariantChannel(std::move(k_s), std::move(k_a), std::move(rho_a), std::move(e_a),
                            std::move(v_sa));
}

CovariantChannel build_free_channel(Index d_s, Index d_a, RngStream& rng) {
    if (d_s < 2 || d_a < 2) fail("InvalidDimension", "system and ancilla need d >= 2");

    GeneratorObservable k_s = random_generator(d_s, rng);
    GeneratorObservable k_a = random_generator(d_a, rng);

    // Ancilla state: random mixture of the K_a eigenprojectors.
    RealVector weights(d_a);
    double total_weight = 0.0;
    for (Index i = 0; i < d_a; ++i) {
        weights(i) = -std::log(1.0 - rng.uniform());
        total_weight += weights(i);
    }
    const Matrix& wa = k_a.eigenbasis().matrix();
    Matrix rho_a = Matrix::Zero(d_a, d_a);
    Matrix e_a = Matrix::Zero(d_a, d_a);
    for (Index i = 0; i < d_a; ++i) {
        rho_a += (weights(i) / total_weight) * wa.col(i) * wa.col(i).adjoint();
        e_a += rng.uniform() * wa.col(i) * wa.col(i).adjoint();
    }

    const Matrix total = kron(k_s.matrix(), Matrix::Identity(d_a, d_a)) +
                         kron(Matrix::Identity(d_s, d_s), k_a.matrix());
    const Matrix v_sa = random_covariant_unitary(GeneratorObservable::validated(total), rng);

    return CovariantChannel::validated(std::move(k_s), std::move(k_a),
                                       DensityMatrix::validated(rho_a, 1e-9), std::move(e_a),
                                       v_sa);
}

CovariantChannel build_free_channel(Index d_s, Index d_a, std::uint64_t seed) {
    RngStream rng(seed);
    return build_free_channel(d_s, d_a, rng);
}

Matrix apply_channel(const CovariantChannel& ch, const Matrix& rho_s) {
    require_dim(ch.dim_s(), rho_s.rows(), "apply_channel");
    const Index d_a = ch.dim_a();

    // Sandwich with sqrt(E_a) so the output is Hermitian positive by
    // construction: Tr_a((I (x) sqrt(E)) B (I (x) sqrt(E))).
    Eigen::SelfAdjointEigenSolver<Matrix> effect_eig((ch.e_a() + ch.e_a().adjoint()) / 2.0);
    const RealVector clamped = effect_eig.eigenvalues().cwiseMax(0.0);
    const Matrix sqrt_e = effect_eig.eigenvectors() *
                          clamped.cwiseSqrt().asDiagonal().toDenseMatrix().cast<Complex>() *
                          effect_eig.eigenvectors().adjoint();

    const Matrix joint = kron(rho_s, ch.rho_a().matrix());
    const Matrix evolved = ch.v_sa() * joint * ch.v_sa().adjoint();
    const Matrix full_sqrt_e = kron(Matrix::Identity(ch.dim_s(), ch.dim_s()), sqrt_e);
    const Matrix sandwiched = full_sqrt_e * evolved * full_sqrt_e;
    return partial_trace_matrix(sandwiched, ch.dim_s(), d_a, 1);
}

Matrix apply_channel(const CovariantChannel& ch, const DensityMatrix& rho_s) {
    return apply_channel(ch, rho_s.matrix());
}

// --------------------------------------------------------- property harness

namespace {

struct Violation {
    double incoherent = 0.0;
    double converse = 0.0;
    double convexity = 0.0;
    double unitary = 0.0;
    double covariant = 0.0;
    double partial = 0.0;
    double product_eq = 0.0;
    double channel = 0.0;
};

} // namespace

PropertyReport run_property_suite(Index d, int n_instances, std::uint64_t seed, Index d_a) {
    if (d < 2) fail("InvalidDimension", "suite requires d >= 2");
    if (n_instances < 1) fail("InvalidOptions", "n_instances must be >= 1");

    std::vector<Violation> rows(static_cast<size_t>(n_instances));
    parallel_for(n_instances, [&](long long i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        Violation& v = rows[static_cast<size_t>(i)];

        const GeneratorObservable k = random_generator(d, rng);
        const Index rank = 1 + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(d)));
        const DensityMatrix rho = random_density_matrix(d, rank, rng);

        // Zero coherence for mixtures of generator eigenprojectors.
        {
            RealVector w(d);
            double total = 0.0;
            for (Index j = 0; j < d; ++j) {
                w(j) = -std::log(1.0 - rng.uniform());
                total += w(j);
            }
            Matrix inc = Matrix::Zero(d, d);
            const Matrix& wk = k.eigenbasis().matrix();
            for (Index j = 0; j < d; ++j)
                inc += (w(j) / total) * wk.col(j) * wk.col(j).adjoint();
            v.incoherent = tc_w_coherence_exact(inc, k.matrix());
        }

        // Conversely a noncommuting pair must carry coherence: the trace norm
        // dominates the largest commutator entry.
        {
            const Matrix m = Complex(0.0, -1.0) * commutator(k.matrix(), rho.matrix());
            v.converse = std::max(0.0, 0.5 * max_abs(m) -
                                           tc_w_coherence_exact(rho.matrix(), k.matrix()));
        }

        // Convexity of the mixture.
        {
            const int parts = 2 + static_cast<int>(rng.uniform_index(3));
            double wsum = 0.0;
            std::vector<double> w(static_cast<size_t>(parts));
            std::vector<DensityMatrix> states;
            for (int j = 0; j < parts; ++j) {
                w[static_cast<size_t>(j)] = -std::log(1.0 - rng.uniform());
                wsum += w[static_cast<size_t>(j)];
                const Index rj =
                    1 + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(d)));
                states.push_back(random_density_matrix(d, rj, rng));
            }
            Matrix mix = Matrix::Zero(d, d);
            double rhs = 0.0;
            for (int j = 0; j < parts; ++j) {
                const double p = w[static_cast<size_t>(j)] / wsum;
                mix += p * states[static_cast<size_t>(j)].matrix();
                rhs += p * tc_w_coherence_exact(states[static_cast<size_t>(j)], k);
            }
            v.convexity = std::max(0.0, tc_w_coherence_exact(mix, k.matrix()) - rhs);
        }

        // Invariance under joint conjugation.
        {
            const Matrix u = haar_random_unitary(d, rng);
            const double before = tc_w_coherence_exact(rho, k);
            const double after = tc_w_coherence_exact(u * rho.matrix() * u.adjoint(),
                                                      u * k.matrix() * u.adjoint());
            v.unitary = std::abs(before - after);
        }

        // Invariance under covariant unitaries.
        {
            const Matrix u = random_covariant_unitary(k, rng);
            const double before = tc_w_coherence_exact(rho, k);
            const double after = tc_w_coherence_exact(u * rho.matrix() * u.adjoint(), k.matrix());
            v.covariant = std::abs(before - after);
        }

        // Discarding a correlated party cannot raise the coherence; product
        // states sit exactly at the boundary.
        {
            const Matrix k_ext = kron(k.matrix(), Matrix::Identity(d_a, d_a));
            const DensityMatrix rho12 = random_density_matrix(
                d * d_a, 1 + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(d * d_a))),
                rng);
            const DensityMatrix rho1 = partial_trace(rho12, d, d_a, 1);
            v.partial = std::max(0.0, tc_w_coherence_exact(rho1, k) -
                                          tc_w_coherence_exact(rho12.matrix(), k_ext));

            const DensityMatrix rho_b = random_density_matrix(d_a, d_a, rng);
            const Matrix product = kron(rho.matrix(), rho_b.matrix());
            v.product_eq = std::abs(tc_w_coherence_exact(product, k_ext) -
                                    tc_w_coherence_exact(rho, k));
        }

        // Channel monotonicity for a fresh free dilation around this K_s.
        {
            const CovariantChannel ch = build_free_channel(d, d_a, rng);
            const Matrix out = apply_channel(ch, rho);
            v.channel = std::max(0.0, tc_w_coherence_exact(out, ch.k_s().matrix()) -
                                          tc_w_coherence_exact(rho.matrix(), ch.k_s().matrix()));
        }
    });

    auto max_of = [&](double Violation::* field) {
        double worst = 0.0;
        for (const auto& row : rows) worst = std::max(worst, row.*field);
        return worst;
    };

    constexpr double tol = 1e-8;
    PropertyReport report;
    report.dim = d;
    report.dim_ancilla = d_a;
    report.instances = n_instances;
    report.seed = seed;
    auto add = [&](const std::string& name, double worst) {
        report.checks.push_back({name, n_instances, worst, tol, worst <= tol});
    };
    add("faithfulness_incoherent", max_of(&Violation::incoherent));
    add("faithfulness_converse", max_of(&Violation::converse));
    add("convexity", max_of(&Violation::convexity));
    add("unitary_invariance", max_of(&Violation::unitary));
    add("covariant_unitary_invariance", max_of(&Violation::covariant));
    add("partial_trace_monotone", max_of(&Violation::partial));
    add("product_state_equality", max_of(&Violation::product_eq));
    add("channel_monotone", max_of(&Violation::channel));
    return report;
}

} // namespace asymcoh
