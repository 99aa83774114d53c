// weak_values.hpp — weak values, Kirkwood-Dirac quasiprobability tables,
// the imaginary-part/log-derivative identity, and classical Fisher information.
//
// The weak value of K with preselected state rho and postselected |x> is
//   K^w(x|rho) = <x|K rho|x> / <x|rho|x>,
// generally complex. Its imaginary part equals half the logarithmic
// derivative of the Born probability along the translation generated by K,
// which is what the residual check and the Fisher sums exercise.

#pragma once

#include "core.hpp"

namespace asymcoh {

// Denominators at or below this floor are reported as PostselectionTooRare.
inline constexpr double kPostselectionFloor = 1e-12;

Complex weak_value(const GeneratorObservable& k, const DensityMatrix& rho, const Vector& x,
                   double floor = kPostselectionFloor);

// Born probabilities <x|rho|x>, clamped to be nonnegative.
RealVector born_probabilities(const Matrix& rho, const Matrix& basis_cols);

class KDTable {
public:
    // entries(k, x) = <x|k><k|rho|x>. Marginal certificates are computed at
    // construction; a violation above 1e-10 is rejected.
    static KDTable build(const DensityMatrix& rho, const OrthonormalBasis& basis_k,
                         const OrthonormalBasis& basis_x);

    Index dim() const { return entries_.rows(); }
    Complex entry(Index k, Index x) const { return entries_(k, x); }
    const Matrix& entries() const { return entries_; }
    const OrthonormalBasis& basis_k() const { return basis_k_; }
    const OrthonormalBasis& basis_x() const { return basis_x_; }

    double row_marginal_deviation() const { return row_dev_; }  // vs <k|rho|k>
    double col_marginal_deviation() const { return col_dev_; }  // vs <x|rho|x>
    double total_sum_deviation() const { return sum_dev_; }     // vs 1

    // Sum_{k,x} |Im entries(k,x)|.
    double abs_imaginary_total() const;

private:
    KDTable(Matrix e, OrthonormalBasis bk, OrthonormalBasis bx, double rd, double cd, double sd)
        : entries_(std::move(e)), basis_k_(std::move(bk)), basis_x_(std::move(bx)),
          row_dev_(rd), col_dev_(cd), sum_dev_(sd) {}

    Matrix entries_;
    OrthonormalBasis basis_k_;
    OrthonormalBasis basis_x_;
    double row_dev_, col_dev_, sum_dev_;
};

inline KDTable kd_quasiprobability(const DensityMatrix& rho, const OrthonormalBasis& basis_k,
                                   const OrthonormalBasis& basis_x) {
    return KDTable::build(rho, basis_k, basis_x);
}

// Maximum over outcomes of
//   | Im K^w(x|rho) - central-difference log-derivative at step delta |.
// The difference shrinks as O(delta^2). Outcomes need Pr(x|rho) > 1e-8.
double log_derivative_identity_residual(const DensityMatrix& rho, const GeneratorObservable& k,
                                        const OrthonormalBasis& basis, double delta);

// 4 sum_x (Im K^w)^2 Pr(x|rho); outcomes with Pr <= 1e-12 contribute zero.
double classical_fisher_information(const DensityMatrix& rho, const GeneratorObservable& k,
                                    const OrthonormalBasis& basis);

// Same quantity from central finite differences of the Born distribution —
// an independent code path used for cross-checks.
double classical_fisher_information_fd(const DensityMatrix& rho, const GeneratorObservable& k,
                                       const OrthonormalBasis& basis, double delta);

} // namespace asymcoh
