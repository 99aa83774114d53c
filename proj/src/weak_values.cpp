// weak_values.cpp

#include "asymcoh/weak_values.hpp"

#include "asymcoh/covariant.hpp"

#include <cmath>
#include <sstream>

namespace asymcoh {

namespace {

void require_dim(Index a, Index b, const char* who) {
    if (a != b)
        fail("DimensionMismatch",
             std::string(who) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

} // namespace

Complex weak_value(const GeneratorObservable& k, const DensityMatrix& rho, const Vector& x,
                   double floor) {
    require_dim(k.dim(), rho.dim(), "weak_value");
    require_dim(rho.dim(), x.size(), "weak_value");
    const Vector krho_x = k.matrix() * (rho.matrix() * x);
    const Complex numerator = x.dot(krho_x); // <x|K rho|x>
    const double denominator = x.dot(rho.matrix() * x).real();
    if (denominator <= floor) {
        std::ostringstream os;
        os << "Tr(Pi_x rho) = " << denominator << " at or below floor " << floor;
        fail("PostselectionTooRare", os.str());
    }
    return numerator / denominator;
}

RealVector born_probabilities(const Matrix& rho, const Matrix& basis_cols) {
    const Matrix rb = rho * basis_cols;
    RealVector p(basis_cols.cols());
    for (Index i = 0; i < basis_cols.cols(); ++i)
        p(i) = std::max(0.0, basis_cols.col(i).dot(rb.col(i)).real());
    return p;
}

KDTable KDTable::build(const DensityMatrix& rho, const OrthonormalBasis& basis_k,
                       const OrthonormalBasis& basis_x) {
    require_dim(rho.dim(), basis_k.dim(), "kd_quasiprobability");
    require_dim(rho.dim(), basis_x.dim(), "kd_quasiprobability");
    const Index d = rho.dim();

    // entries(k, x) = <x|k><k|rho|x>
    const Matrix overlap = basis_x.matrix().adjoint() * basis_k.matrix(); // <x|k>
    const Matrix krho = basis_k.matrix().adjoint() * rho.matrix() * basis_x.matrix(); // <k|rho|x>
    Matrix entries(d, d);
    for (Index k = 0; k < d; ++k)
        for (Index x = 0; x < d; ++x)
            entries(k, x) = overlap(x, k) * krho(k, x);

    const RealVector pk = born_probabilities(rho.matrix(), basis_k.matrix());
    const RealVector px = born_probabilities(rho.matrix(), basis_x.matrix());
    double row_dev = 0.0, col_dev = 0.0;
    for (Index k = 0; k < d; ++k)
        row_dev = std::max(row_dev, std::abs(entries.row(k).sum() - Complex(pk(k), 0.0)));
    for (Index x = 0; x < d; ++x)
        col_dev = std::max(col_dev, std::abs(entries.col(x).sum() - Complex(px(x), 0.0)));
    const double sum_dev = std::abs(entries.sum() - Complex(1.0, 0.0));

    if (row_dev > 1e-10 || col_dev > 1e-10 || sum_dev > 1e-10)
        fail("MarginalViolation", "KD marginals deviate by row " + std::to_string(row_dev) +
                                      ", col " + std::to_string(col_dev) + ", sum " +
                                      std::to_string(sum_dev));
    return KDTable(std::move(entries), basis_k, basis_x, row_dev, col_dev, sum_dev);
}

double KDTable::abs_imaginary_total() const {
    double total = 0.0;
    for (Index k = 0; k < entries_.rows(); ++k)
        for (Index x = 0; x < entries_.cols(); ++x)
            total += std::abs(entries_(k, x).imag());
    return total;
}

double log_derivative_identity_residual(const DensityMatrix& rho, const GeneratorObservable& k,
                                        const OrthonormalBasis& basis, double delta) {
    require_dim(rho.dim(), k.dim(), "log_derivative_identity_residual");
    require_dim(rho.dim(), basis.dim(), "log_derivative_identity_residual");
    if (!(delta > 0.0 && delta <= 0.1))
        fail("DeltaOutOfRange", "delta must lie in (0, 0.1], got " + std::to_string(delta));

    const RealVector p0 = born_probabilities(rho.matrix(), basis.matrix());
    for (Index x = 0; x < p0.size(); ++x)
        if (p0(x) <= 1e-8)
            fail("ProbabilityTooSmall",
                 "Pr(x=" + std::to_string(x) + "|rho) = " + std::to_string(p0(x)));

    const Matrix u_plus = translation_unitary(k, delta);
    const Matrix u_minus = translation_unitary(k, -delta);
    const Matrix rho_plus = u_plus * rho.matrix() * u_plus.adjoint();
    const Matrix rho_minus = u_minus * rho.matrix() * u_minus.adjoint();
    const RealVector pp = born_probabilities(rho_plus, basis.matrix());
    const RealVector pm = born_probabilities(rho_minus, basis.matrix());

    const Matrix krho = k.matrix() * rho.matrix();
    double worst = 0.0;
    for (Index x = 0; x < p0.size(); ++x) {
        const Complex diag = basis.vector(x).dot(krho * basis.vector(x));
        const double im_weak = diag.imag() / p0(x);
        const double log_derivative = (pp(x) - pm(x)) / (2.0 * delta) / p0(x);
        worst = std::max(worst, std::abs(im_weak - 0.5 * log_derivative));
    }
    return worst;
}

double classical_fisher_information(const DensityMatrix& rho, const GeneratorObservable& k,
                                    const OrthonormalBasis& basis) {
    require_dim(rho.dim(), k.dim(), "classical_fisher_information");
    require_dim(rho.dim(), basis.dim(), "classical_fisher_information");
    const Matrix krho = k.matrix() * rho.matrix();
    const RealVector p = born_probabilities(rho.matrix(), basis.matrix());
    double total = 0.0;
    for (Index x = 0; x < p.size(); ++x) {
        if (p(x) <= 1e-12) continue; // removable singularity: p (dlog p)^2 -> 0
        const double im = basis.vector(x).dot(krho * basis.vector(x)).imag();
        total += 4.0 * im * im / p(x);
    }
    return total;
}

double classical_fisher_information_fd(const DensityMatrix& rho, const GeneratorObservable& k,
                                       const OrthonormalBasis& basis, double delta) {
    require_dim(rho.dim(), k.dim(), "classical_fisher_information_fd");
    if (!(delta > 0.0 && delta <= 0.1))
        fail("DeltaOutOfRange", "delta must lie in (0, 0.1], got " + std::to_string(delta));
    const Matrix u_plus = translation_unitary(k, delta);
    const Matrix u_minus = translation_unitary(k, -delta);
    const RealVector p0 = born_probabilities(rho.matrix(), basis.matrix());
    const RealVector pp =
        born_probabilities(u_plus * rho.matrix() * u_plus.adjoint(), basis.matrix());
    const RealVector pm =
        born_probabilities(u_minus * rho.matrix() * u_minus.adjoint(), basis.matrix());
    double total = 0.0;
    for (Index x = 0; x < p0.size(); ++x) {
        if (p0(x) <= 1e-12) continue;
        const double dp = (pp(x) - pm(x)) / (2.0 * delta);
        total += dp * dp / p0(x);
    }
    return total;
}

} // namespace asymcoh
