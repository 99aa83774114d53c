// bounds.hpp — quantum variance, quantum Fisher information, and the
// inequality chain between them and the TC w-coherence: the standard
// deviation bound, the Fisher bound with its pure-state saturation, the
// Kirkwood-Dirac imaginary-part bound, the optimal-estimation bound, and the
// noncommutativity lower bound with its uncertainty-product form.

#pragma once

#include "coherence.hpp"
#include "core.hpp"
#include "weak_values.hpp"

#include <optional>

namespace asymcoh {

// Tr(K^2 rho) - (Tr(K rho))^2, clamped to be nonnegative.
double variance(const GeneratorObservable& k, const DensityMatrix& rho);

// Quantum Fisher information for the unitary family e^{-iK theta}, via the
// symmetric-logarithmic-derivative closed form in the eigenbasis {p_i, |i>}
// of rho:
//   J = 2 sum_{i,j: p_i + p_j > 1e-12} (p_i - p_j)^2 / (p_i + p_j) |<i|K|j>|^2.
// Equals 4 * variance for pure states.
double qfi_unitary_family(const DensityMatrix& rho, const GeneratorObservable& k);

// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)).
double fidelity(const Matrix& rho, const Matrix& sigma);

// Independent second path: Richardson-extrapolated central fidelity
// differences 8 (1 - F(rho, rho_delta)) / delta^2 at steps delta and
// 2 delta, removing the O(delta^2) term.
double qfi_fidelity_fd(const DensityMatrix& rho, const GeneratorObservable& k,
                       double delta = 4e-3);

struct BoundsReport {
    double c_w = 0.0;            // closed-form supremum
    double c_w_normalized = 0.0; // c_w / spectral radius
    double std_dev = 0.0;
    double qfi = 0.0;
    double kd_im_bound = 0.0; // sum |Im KD| over (K eigenbasis, argmax basis)
    std::optional<double> kwr_bound;
    double slack_std_dev = 0.0; // std_dev - c_w
    double slack_qfi = 0.0;     // qfi - 4 c_w^2
    double slack_kd = 0.0;      // kd_im_bound - c_w_normalized
    bool std_dev_ok = false;
    bool qfi_ok = false;
    bool kd_ok = false;
    bool all_ok() const { return std_dev_ok && qfi_ok && kd_ok; }
};

// Certifies c_w <= std_dev, 4 c_w^2 <= qfi, and the normalized coherence
// against the Kirkwood-Dirac imaginary total at the argmax basis (slack
// tolerance 1e-9 each). When a partner observable is supplied, kwr_bound
// carries (1/2)|Tr([X~, K~] rho)|.
BoundsReport bounds_report(const DensityMatrix& rho, const GeneratorObservable& k,
                           const std::optional<GeneratorObservable>& x = {});

// (1/2) |Tr([X/|x|max, K/|k|max] rho)|; certified against both normalized
// coherences before returning.
double kwr_lower_bound(const DensityMatrix& rho, const GeneratorObservable& k,
                       const GeneratorObservable& x);

struct UncertaintyProduct {
    double lhs = 0.0; // normalized coherence product
    double rhs = 0.0; // |Tr([X~, K~] rho)|^2 / 4
    bool ok = false;  // lhs >= rhs - 1e-9
};
UncertaintyProduct uncertainty_product_check(const DensityMatrix& rho,
                                             const GeneratorObservable& k,
                                             const GeneratorObservable& x);

struct OptimalEstimationBound {
    double delta2_opt = 0.0; // 1 / (nu * qfi)
    double bound = 0.0;      // 1 / (4 nu c_w^2)
    bool ok = false;
};
OptimalEstimationBound optimal_estimation_bound(const DensityMatrix& rho,
                                                const GeneratorObservable& k, long long nu);

// Fixed spectrum shared by a family of generators; needs at least two
// distinct values or every coherence in the class vanishes.
class SpectrumClass {
public:
    explicit SpectrumClass(RealVector eigenvalues); // throws TrivialSpectrum
    const RealVector& eigenvalues() const { return values_; }
    Index dim() const { return values_.size(); }

private:
    RealVector values_;
};

struct SpectrumClassSup {
    GeneratorObservable best_k;
    double sup_estimate = 0.0; // max_j normalized coherence over sampled K_j
    double kd_bound = 0.0;     // max_j KD imaginary total at K_j's argmax basis
    double kwr_sup = 0.0;      // max_l (1/2)|Tr([K~_l, K~_best] rho)|
    int n_samples = 0;
};
SpectrumClassSup spectrum_class_sup(const DensityMatrix& rho, const SpectrumClass& spectrum,
                                    int n_samples, std::uint64_t seed);

} // namespace asymcoh
