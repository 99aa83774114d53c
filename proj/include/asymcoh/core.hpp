// core.hpp — validated linear-algebra substrate
//
// Density matrices, Hermitian generators, orthonormal bases, deterministic
// Hermitian eigensystems, Haar/Ginibre sampling, tensor products and partial
// traces. Complex doubles throughout; composite index (i1, i2) -> i1*d2 + i2.
// Tolerances are absolute at unit scale unless stated otherwise.
//
// All types are immutable values after construction and safe to share
// read-only across threads.

#pragma once

#include "rng.hpp"
#include "types.hpp"

#include <utility>
#include <vector>

namespace asymcoh {

// ---------------------------------------------------------------- predicates

double max_abs(const Matrix& m);
double hermiticity_deviation(const Matrix& m); // max |m - m^dagger|
bool all_finite(const Matrix& m);

// ------------------------------------------------------------ small builders

Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
Matrix diag_operator(const std::vector<double>& values);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix commutator(const Matrix& a, const Matrix& b); // ab - ba

// --------------------------------------------- deterministic eigendecomposition

struct Eigensystem {
    RealVector values; // ascending
    Matrix vectors;    // columns; phase-fixed, stably ordered
};

// Ascending eigenvalues. Each eigenvector is rescaled so its first
// non-negligible component is real positive; within near-degenerate groups
// columns are sorted lexicographically, so repeated runs agree exactly.
Eigensystem hermitian_eigensystem(const Matrix& h);

// Index ranges [begin, end) of eigenvalues treated as one eigenspace:
// values within 1e-8 * (1 + radius) of each other are grouped.
std::vector<std::pair<Index, Index>> eigenvalue_groups(const RealVector& values);

// ------------------------------------------------------------- domain types

class OrthonormalBasis {
public:
    OrthonormalBasis() : cols_(0, 0), gram_dev_(0.0) {}

    // Columns of `columns` are the basis vectors; Gram deviation above 1e-10
    // is rejected as NotOrthonormal.
    static OrthonormalBasis validated(Matrix columns);
    static OrthonormalBasis standard(Index d);

    Index dim() const { return cols_.rows(); }
    const Matrix& matrix() const { return cols_; }
    Vector vector(Index i) const { return cols_.col(i); }
    double gram_deviation() const { return gram_dev_; }

private:
    OrthonormalBasis(Matrix m, double dev) : cols_(std::move(m)), gram_dev_(dev) {}
    Matrix cols_;
    double gram_dev_;
};

class DensityMatrix {
public:
    // Rejects with NotSquare / NotHermitian / NotPositive / TraceNotOne,
    // each reporting the measured deviation. The stored matrix is the
    // Hermitian part of the input.
    static DensityMatrix validated(const Matrix& raw, double tol = 1e-9);

    const Matrix& matrix() const { return mat_; }
    Index dim() const { return mat_.rows(); }
    double validation_tol() const { return tol_; }
    double purity() const;

    // Bloch components, d == 2 only.
    double bloch_x() const;
    double bloch_y() const;
    double bloch_z() const;

private:
    DensityMatrix(Matrix m, double tol) : mat_(std::move(m)), tol_(tol) {}
    Matrix mat_;
    double tol_;
};

class GeneratorObservable {
public:
    // Hermitian within 1e-10 relative tolerance; caches the eigensystem and
    // checks that sum_k k |k><k| reconstructs the matrix to
    // 1e-10 * spectral_radius (1e-12 absolute when the radius vanishes).
    static GeneratorObservable validated(const Matrix& k);
    static GeneratorObservable pauli_x();
    static GeneratorObservable pauli_y();
    static GeneratorObservable pauli_z();
    static GeneratorObservable from_diagonal(const std::vector<double>& values);

    const Matrix& matrix() const { return mat_; }
    Index dim() const { return mat_.rows(); }
    const RealVector& eigenvalues() const { return evals_; }
    const OrthonormalBasis& eigenbasis() const { return evecs_; }
    double spectral_radius() const { return radius_; }

    // K / |k|_max; throws ZeroGenerator when the spectral radius vanishes.
    Matrix normalized() const;

    std::vector<std::pair<Index, Index>> degenerate_groups() const {
        return eigenvalue_groups(evals_);
    }

private:
    GeneratorObservable(Matrix m, RealVector vals, OrthonormalBasis vecs, double radius)
        : mat_(std::move(m)), evals_(std::move(vals)), evecs_(std::move(vecs)),
          radius_(radius) {}
    Matrix mat_;
    RealVector evals_;
    OrthonormalBasis evecs_;
    double radius_;
};

// --------------------------------------------------------------- random draws

// Haar measure via QR of a complex Ginibre matrix with the diagonal phase fix.
Matrix haar_random_unitary(Index d, RngStream& rng);
Matrix haar_random_unitary(Index d, std::uint64_t seed);

// rho = G G^dagger / tr with G of shape d x rank, entries standard complex
// Gaussian; rank 1 gives a pure state.
DensityMatrix random_density_matrix(Index d, Index rank, RngStream& rng);
DensityMatrix random_density_matrix(Index d, Index rank, std::uint64_t seed);

// Random Hermitian with i.i.d. uniform [-1, 1] spectrum in a Haar eigenbasis.
GeneratorObservable random_generator(Index d, RngStream& rng);

// -------------------------------------------------------------- partial trace

// keep = 1 keeps the d1 factor, keep = 2 the d2 factor.
Matrix partial_trace_matrix(const Matrix& m, Index d1, Index d2, int keep);
DensityMatrix partial_trace(const DensityMatrix& rho12, Index d1, Index d2, int keep);

} // namespace asymcoh
