// core.cpp

#include "asymcoh/core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace asymcoh {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void require_square(const Matrix& m, const char* who) {
    if (m.rows() != m.cols())
        fail("NotSquare", std::string(who) + ": " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()));
}

} // namespace

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_deviation(const Matrix& m) {
    return max_abs(m - m.adjoint());
}

bool all_finite(const Matrix& m) {
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                return false;
    return true;
}

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

Matrix diag_operator(const std::vector<double>& values) {
    Matrix m = Matrix::Zero(static_cast<Index>(values.size()), static_cast<Index>(values.size()));
    for (Index i = 0; i < m.rows(); ++i) m(i, i) = values[static_cast<size_t>(i)];
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix commutator(const Matrix& a, const Matrix& b) {
    require_square(a, "commutator");
    require_square(b, "commutator");
    if (a.rows() != b.rows())
        fail("DimensionMismatch", "commutator: " + std::to_string(a.rows()) + " vs " +
                                      std::to_string(b.rows()));
    return a * b - b * a;
}

// ------------------------------------------------------------- eigensystem

namespace {

// Phase-fix: first component with modulus above threshold made real positive.
void fix_column_phase(Matrix& vecs, Index col) {
    for (Index i = 0; i < vecs.rows(); ++i) {
        const Complex v = vecs(i, col);
        const double a = std::abs(v);
        if (a > 1e-8) {
            vecs.col(col) *= std::conj(v) / a;
            break;
        }
    }
}

bool column_lex_less(const Matrix& vecs, Index a, Index b) {
    for (Index i = 0; i < vecs.rows(); ++i) {
        const Complex va = vecs(i, a), vb = vecs(i, b);
        if (va.real() != vb.real()) return va.real() < vb.real();
        if (va.imag() != vb.imag()) return va.imag() < vb.imag();
    }
    return false;
}

} // namespace

Eigensystem hermitian_eigensystem(const Matrix& h) {
    require_square(h, "hermitian_eigensystem");
    const double dev = hermiticity_deviation(h);
    if (dev > 1e-10 * (1.0 + max_abs(h)))
        fail("NotHermitian", "max |H - H^dag| = " + fmt(dev));

    Eigen::SelfAdjointEigenSolver<Matrix> solver((h + h.adjoint()) / 2.0);
    if (solver.info() != Eigen::Success)
        fail("EigensolverFailure", "self-adjoint eigensolver did not converge");

    RealVector vals = solver.eigenvalues();
    Matrix vecs = solver.eigenvectors();
    for (Index c = 0; c < vecs.cols(); ++c) fix_column_phase(vecs, c);

    // Stable order inside near-degenerate groups.
    for (const auto& [lo, hi] : eigenvalue_groups(vals)) {
        if (hi - lo < 2) continue;
        std::vector<Index> order(static_cast<size_t>(hi - lo));
        std::iota(order.begin(), order.end(), lo);
        std::sort(order.begin(), order.end(),
                  [&](Index a, Index b) { return column_lex_less(vecs, a, b); });
        Matrix sorted(vecs.rows(), hi - lo);
        RealVector sorted_vals(hi - lo);
        for (Index k = 0; k < hi - lo; ++k) {
            sorted.col(k) = vecs.col(order[static_cast<size_t>(k)]);
            sorted_vals(k) = vals(order[static_cast<size_t>(k)]);
        }
        vecs.middleCols(lo, hi - lo) = sorted;
        vals.segment(lo, hi - lo) = sorted_vals;
    }
    return {std::move(vals), std::move(vecs)};
}

std::vector<std::pair<Index, Index>> eigenvalue_groups(const RealVector& values) {
    std::vector<std::pair<Index, Index>> groups;
    if (values.size() == 0) return groups;
    const double radius = values.cwiseAbs().maxCoeff();
    const double threshold = 1e-8 * (1.0 + radius);
    Index lo = 0;
    for (Index i = 1; i <= values.size(); ++i) {
        if (i == values.size() || values(i) - values(i - 1) > threshold) {
            groups.emplace_back(lo, i);
            lo = i;
        }
    }
    return groups;
}

// ---------------------------------------------------------------- OrthonormalBasis

OrthonormalBasis OrthonormalBasis::validated(Matrix columns) {
    require_square(columns, "OrthonormalBasis");
    if (!all_finite(columns)) fail("NotFinite", "basis has non-finite entries");
    const Matrix gram = columns.adjoint() * columns;
    const double dev = max_abs(gram - Matrix::Identity(columns.rows(), columns.cols()));
    if (dev > 1e-10)
        fail("NotOrthonormal", "max |<x_i|x_j> - delta_ij| = " + fmt(dev));
    return OrthonormalBasis(std::move(columns), dev);
}

OrthonormalBasis OrthonormalBasis::standard(Index d) {
    return OrthonormalBasis(Matrix::Identity(d, d), 0.0);
}

// ---------------------------------------------------------------- DensityMatrix

DensityMatrix DensityMatrix::validated(const Matrix& raw, double tol) {
    if (tol <= 0.0) fail("InvalidTolerance", "tol must be positive, got " + fmt(tol));
    require_square(raw, "DensityMatrix");
    if (!all_finite(raw)) fail("NotFinite", "density matrix has non-finite entries");

    const double herm_dev = hermiticity_deviation(raw);
    if (herm_dev > tol)
        fail("NotHermitian", "max |M - M^dag| = " + fmt(herm_dev) + " exceeds tol " + fmt(tol));

    Matrix m = (raw + raw.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -tol)
        fail("NotPositive", "min eigenvalue = " + fmt(min_eig) + " below -tol " + fmt(tol));

    const double trace_dev = std::abs(m.trace() - Complex(1.0, 0.0));
    if (trace_dev > tol)
        fail("TraceNotOne", "|Tr - 1| = " + fmt(trace_dev) + " exceeds tol " + fmt(tol));

    return DensityMatrix(std::move(m), tol);
}

double DensityMatrix::purity() const {
    return (mat_ * mat_).trace().real();
}

namespace {
double bloch_component(const Matrix& rho, const Matrix& pauli) {
    if (rho.rows() != 2) fail("DimensionMismatch", "Bloch components require d = 2");
    return (pauli * rho).trace().real();
}
} // namespace

double DensityMatrix::bloch_x() const { return bloch_component(mat_, sigma_x()); }
double DensityMatrix::bloch_y() const { return bloch_component(mat_, sigma_y()); }
double DensityMatrix::bloch_z() const { return bloch_component(mat_, sigma_z()); }

// ------------------------------------------------------------ GeneratorObservable

GeneratorObservable GeneratorObservable::validated(const Matrix& k) {
    require_square(k, "GeneratorObservable");
    if (!all_finite(k)) fail("NotFinite", "generator has non-finite entries");
    Eigensystem eig = hermitian_eigensystem(k); // throws NotHermitian

    const double radius = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
    Matrix rebuilt = eig.vectors * eig.values.asDiagonal().toDenseMatrix().cast<Complex>() *
                     eig.vectors.adjoint();
    const double recon = max_abs(rebuilt - (k + k.adjoint()) / 2.0);
    const double bound = radius > 0.0 ? 1e-10 * radius : 1e-12;
    if (recon > bound)
        fail("ReconstructionFailure", "spectral rebuild error " + fmt(recon));

    OrthonormalBasis basis = OrthonormalBasis::validated(eig.vectors);
    return GeneratorObservable((k + k.adjoint()) / 2.0, std::move(eig.values), std::move(basis),
                               radius);
}

GeneratorObservable GeneratorObservable::pauli_x() { return validated(sigma_x()); }
GeneratorObservable GeneratorObservable::pauli_y() { return validated(sigma_y()); }
GeneratorObservable GeneratorObservable::pauli_z() { return validated(sigma_z()); }

GeneratorObservable GeneratorObservable::from_diagonal(const std::vector<double>& values) {
    return validated(diag_operator(values));
}

Matrix GeneratorObservable::normalized() const {
    if (radius_ <= 0.0) fail("ZeroGenerator", "spectral radius is zero");
    return mat_ / radius_;
}

// --------------------------------------------------------------- random draws

Matrix haar_random_unitary(Index d, RngStream& rng) {
    if (d < 1) fail("InvalidDimension", "d must be >= 1, got " + std::to_string(d));
    Matrix g(d, d);
    for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < d; ++i)
            g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Phase fix on the R diagonal makes the distribution exactly Haar.
    for (Index j = 0; j < d; ++j) {
        const Complex rj = r(j, j);
        const double a = std::abs(rj);
        q.col(j) *= (a > 0.0) ? rj / a : Complex(1.0, 0.0);
    }
    return q;
}

Matrix haar_random_unitary(Index d, std::uint64_t seed) {
    RngStream rng(seed);
    return haar_random_unitary(d, rng);
}

DensityMatrix random_density_matrix(Index d, Index rank, RngStream& rng) {
    if (rank < 1 || rank > d)
        fail("InvalidRank", "rank must lie in [1, " + std::to_string(d) + "], got " +
                                std::to_string(rank));
    Matrix g(d, rank);
    for (Index j = 0; j < rank; ++j)
        for (Index i = 0; i < d; ++i)
            g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix::validated(m, 1e-9);
}

DensityMatrix random_density_matrix(Index d, Index rank, std::uint64_t seed) {
    RngStream rng(seed);
    return random_density_matrix(d, rank, rng);
}

GeneratorObservable random_generator(Index d, RngStream& rng) {
    RealVector spectrum(d);
    for (Index i = 0; i < d; ++i) spectrum(i) = 2.0 * rng.uniform() - 1.0;
    const Matrix u = haar_random_unitary(d, rng);
    const Matrix k = u * spectrum.asDiagonal().toDenseMatrix().cast<Complex>() * u.adjoint();
    return GeneratorObservable::validated(k);
}

// -------------------------------------------------------------- partial trace

Matrix partial_trace_matrix(const Matrix& m, Index d1, Index d2, int keep) {
    require_square(m, "partial_trace");
    if (m.rows() != d1 * d2)
        fail("DimensionMismatch", "partial_trace: dim " + std::to_string(m.rows()) +
                                      " != " + std::to_string(d1) + "*" + std::to_string(d2));
    if (keep != 1 && keep != 2) fail("InvalidSubsystem", "keep must be 1 or 2");

    if (keep == 1) {
        Matrix out = Matrix::Zero(d1, d1);
        for (Index i = 0; i < d1; ++i)
            for (Index j = 0; j < d1; ++j)
                for (Index a = 0; a < d2; ++a)
                    out(i, j) += m(i * d2 + a, j * d2 + a);
        return out;
    }
    Matrix out = Matrix::Zero(d2, d2);
    for (Index a = 0; a < d2; ++a)
        for (Index b = 0; b < d2; ++b)
            for (Index i = 0; i < d1; ++i)
                out(a, b) += m(i * d2 + a, i * d2 + b);
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho12, Index d1, Index d2, int keep) {
    return DensityMatrix::validated(partial_trace_matrix(rho12.matrix(), d1, d2, keep),
                                    rho12.validation_tol());
}

} // namespace asymcoh
