#ifndef CNS_TEST_ORACLE_HPP
#define CNS_TEST_ORACLE_HPP

// Dense small-grid reference implementations used only by tests: explicit
// matrix assembly of the linear operators (derived from the stencil rules,
// independently of the matrix-free kernels), a cyclic Jacobi eigensolver,
// matrix-exponential heat stepping and the dense Stokes spectrum.

#include <vector>

#include "cns/flow.hpp"
#include "cns/grid.hpp"

namespace cns::oracle {

struct DenseMatrix {
    int rows = 0, cols = 0;
    std::vector<double> a;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0.0) {}
    double& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
    double at(int i, int j) const { return a[std::size_t(i) * cols + j]; }

    std::vector<double> apply(const std::vector<double>& x) const;
    DenseMatrix multiply(const DenseMatrix& other) const;
    DenseMatrix transposed() const;
};

enum class OpId { laplacian_neumann, laplacian_dirichlet, gradient, divergence, projection };

// Flattened index maps for interior cells and interior faces (wall faces and
// ghosts are excluded; they are constrained, not unknowns).
struct CellIndexer {
    explicit CellIndexer(const Grid& g);
    const Grid* grid;
    long count = 0;
    long id(int i, int j, int k) const;
};

struct FaceIndexer {
    explicit FaceIndexer(const Grid& g);
    const Grid* grid;
    long offsets[3] = {0, 0, 0};
    long dims[3][3] = {};
    long count = 0;
    long id(int c, int i, int j, int k) const;  // own-axis index 1..n-1
};

std::vector<double> flatten_cells(const ScalarField& f);
void unflatten_cells(const std::vector<double>& x, ScalarField& f);
std::vector<double> flatten_faces(const VectorField& v);
void unflatten_faces(const std::vector<double>& x, VectorField& v);

/// Assembles the requested operator; throws std::invalid_argument when the
/// grid exceeds 1e4 unknowns.
DenseMatrix assemble(OpId op, const Grid& g);

/// Cyclic Jacobi for symmetric matrices: fills eigenvalues (ascending) and the
/// corresponding orthonormal eigenvectors as columns.
void jacobi_eigen(const DenseMatrix& sym, std::vector<double>& values, DenseMatrix& vectors);

/// Applies exp(t * Laplacian_Neumann) by dense eigendecomposition.
ScalarField heat_reference(const ScalarField& n0, double t, const Grid& g);

struct StokesEigenpair {
    double value = 0.0;
    VectorField field;
};

/// Dense spectrum of A = P(-Laplacian_Dirichlet) restricted to the discretely
/// divergence-free subspace, ascending.
std::vector<StokesEigenpair> stokes_eigenpairs(const Grid& g);

}  // namespace cns::oracle

#endif
