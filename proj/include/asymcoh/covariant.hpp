// covariant.hpp — translation unitaries, translationally-covariant unitaries,
// free Stinespring-dilation channels, and the numerical property harness for
// the coherence monotone.

#pragma once

#include "core.hpp"

#include <string>
#include <vector>

namespace asymcoh {

// e^{-i K theta} via the cached eigendecomposition of K.
Matrix translation_unitary(const GeneratorObservable& k, double theta);

// Haar-random block unitary on each (near-)degenerate eigenspace of K; the
// result commutes with K. Nondegenerate K gives a random phase diagonal in
// its eigenbasis; K proportional to the identity gives a full Haar unitary.
Matrix random_covariant_unitary(const GeneratorObservable& k, RngStream& rng);

// Channel rho_s -> Tr_a((I (x) E_a) V (rho_s (x) rho_a) V^dag) with an
// incoherent ancilla state and effect and a joint unitary commuting with the
// total generator. Trace can only decrease.
class CovariantChannel {
public:
    static CovariantChannel validated(GeneratorObservable k_s, GeneratorObservable k_a,
                                      DensityMatrix rho_a, Matrix e_a, Matrix v_sa);

    const GeneratorObservable& k_s() const { return k_s_; }
    const GeneratorObservable& k_a() const { return k_a_; }
    const DensityMatrix& rho_a() const { return rho_a_; }
    const Matrix& e_a() const { return e_a_; }
    const Matrix& v_sa() const { return v_sa_; }
    Index dim_s() const { return k_s_.dim(); }
    Index dim_a() const { return k_a_.dim(); }

private:
    CovariantChannel(GeneratorObservable ks, GeneratorObservable ka, DensityMatrix ra, Matrix ea,
                     Matrix v)
        : k_s_(std::move(ks)), k_a_(std::move(ka)), rho_a_(std::move(ra)), e_a_(std::move(ea)),
          v_sa_(std::move(v)) {}
    GeneratorObservable k_s_;
    GeneratorObservable k_a_;
    DensityMatrix rho_a_;
    Matrix e_a_;
    Matrix v_sa_;
};

// Random spectra for both generators, an ancilla state mixed in the ancilla
// eigenbasis, effect eigenvalues uniform in [0, 1], and a covariant joint
// unitary drawn from the commutant of the total generator.
CovariantChannel build_free_channel(Index d_s, Index d_a, RngStream& rng);
CovariantChannel build_free_channel(Index d_s, Index d_a, std::uint64_t seed);

// Output is positive with trace at most one (subnormalized when E_a < I).
Matrix apply_channel(const CovariantChannel& ch, const Matrix& rho_s);
Matrix apply_channel(const CovariantChannel& ch, const DensityMatrix& rho_s);

// --------------------------------------------------------- property harness

struct PropertyCheck {
    std::string name;
    int instances = 0;
    double max_violation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct PropertyReport {
    Index dim = 0;
    Index dim_ancilla = 0;
    int instances = 0;
    std::uint64_t seed = 0;
    std::vector<PropertyCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Runs every monotone property on fresh random instances: faithfulness in
// both directions, convexity, unitary and covariant-unitary invariance,
// partial-trace monotonicity with its product-state equality branch, and
// Stinespring-channel monotonicity. Violations are report entries, not
// errors.
PropertyReport run_property_suite(Index d, int n_instances, std::uint64_t seed, Index d_a = 2);

} // namespace asymcoh
