#ifndef CNS_GRID_HPP
#define CNS_GRID_HPP

/// Uniform Cartesian box (2D/3D) with cell-centered scalars and MAC
/// face-staggered vectors, one ghost layer each.
///
/// Layout conventions:
///  - scalars: cells[a] values per axis plus one ghost on each side;
///    interior indices run 0..cells[a]-1, ghosts sit at -1 and cells[a].
///  - vector component c: faces along axis c at indices 0..cells[c] (0 and
///    cells[c] lie exactly on the walls), ghosts at -1 and cells[c]+1;
///    the other axes are cell-centered like scalars.
/// Axis 0 is the fastest-varying index.

#include <array>
#include <cstddef>
#include <vector>

namespace cns {

struct Grid {
    int dim = 2;
    std::array<int, 3> cells{0, 0, 1};
    std::array<double, 3> extents{1.0, 1.0, 1.0};
    std::array<double, 3> dx{0.0, 0.0, 0.0};

    Grid() = default;
    /// Throws std::invalid_argument for dim outside {2,3}, cells < 4 per axis
    /// or non-positive extents.
    Grid(int dim_, std::array<int, 3> cells_, std::array<double, 3> extents_);

    double cell_volume() const;
    double min_dx() const;
    long interior_cells() const;
    /// Cell-center coordinate along axis a.
    double center(int a, int i) const { return (double(i) + 0.5) * dx[a]; }
    /// Face coordinate along axis a.
    double face(int a, int i) const { return double(i) * dx[a]; }

    bool operator==(const Grid& o) const;
};

enum class BC { neumann_zero, dirichlet_zero };

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g);

    double& operator()(int i, int j, int k = 0) {
        return data_[base_ + i + std::size_t(j) * st1_ + std::size_t(k) * st2_];
    }
    double operator()(int i, int j, int k = 0) const {
        return data_[base_ + i + std::size_t(j) * st1_ + std::size_t(k) * st2_];
    }

    const Grid& grid() const { return *grid_; }
    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    /// Linear index and axis strides for pointer-style kernels.
    std::size_t index(int i, int j, int k = 0) const {
        return base_ + i + std::size_t(j) * st1_ + std::size_t(k) * st2_;
    }
    std::ptrdiff_t stride(int axis) const {
        return axis == 0 ? 1 : (axis == 1 ? std::ptrdiff_t(st1_) : std::ptrdiff_t(st2_));
    }
    const double* data() const { return data_.data(); }
    double* data() { return data_.data(); }

    void fill(double v);

private:
    const Grid* grid_ = nullptr;
    std::vector<double> data_;
    std::size_t base_ = 0, st1_ = 0, st2_ = 0;
};

class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const Grid& g);

    double& comp(int c, int i, int j, int k = 0) {
        const Layout& L = lay_[c];
        return data_[c][L.base + i + std::size_t(j) * L.st1 + std::size_t(k) * L.st2];
    }
    double comp(int c, int i, int j, int k = 0) const {
        const Layout& L = lay_[c];
        return data_[c][L.base + i + std::size_t(j) * L.st1 + std::size_t(k) * L.st2];
    }

    const Grid& grid() const { return *grid_; }
    std::vector<double>& raw(int c) { return data_[c]; }
    const std::vector<double>& raw(int c) const { return data_[c]; }

    std::size_t index(int c, int i, int j, int k = 0) const {
        const Layout& L = lay_[c];
        return L.base + i + std::size_t(j) * L.st1 + std::size_t(k) * L.st2;
    }
    std::ptrdiff_t stride(int c, int axis) const {
        const Layout& L = lay_[c];
        return axis == 0 ? 1 : (axis == 1 ? std::ptrdiff_t(L.st1) : std::ptrdiff_t(L.st2));
    }
    const double* data(int c) const { return data_[c].data(); }
    double* data(int c) { return data_[c].data(); }

    void fill(double v);

private:
    struct Layout {
        std::size_t base = 0, st1 = 0, st2 = 0;
    };
    const Grid* grid_ = nullptr;
    std::array<std::vector<double>, 3> data_;
    std::array<Layout, 3> lay_;
};

/// Ghost fill for scalars: neumann_zero mirrors interior values, dirichlet_zero
/// reflects with a sign flip (boundary-face value 0). Corners become mirrors of
/// mirrors by filling axis by axis.
void fill_ghosts(ScalarField& s, BC bc);

/// Ghost fill for staggered vectors. dirichlet_zero is no-slip: face values on
/// the wall are set to zero exactly, ghost layers reflect odd. neumann_zero
/// mirrors across the wall.
void fill_ghosts(VectorField& v, BC bc);

// --- reductions over interior values (ghosts never contribute) ---

double integrate(const ScalarField& s);           // sum * cell volume
double min_interior(const ScalarField& s);
double max_interior(const ScalarField& s);
double l2_norm(const ScalarField& s);             // sqrt(sum v^2 * vol)

/// L2 norm over interior + wall faces, uniform face weight = cell volume.
/// Wall faces of a no-slip field are zero, so they never contribute.
double l2_norm(const VectorField& v);
double dot(const VectorField& a, const VectorField& b);
double max_abs(const VectorField& v);

bool all_finite(const ScalarField& s);
bool all_finite(const VectorField& v);

// --- whole-field linear algebra helpers (operate on raw storage) ---

void copy_into(const ScalarField& src, ScalarField& dst);
void copy_into(const VectorField& src, VectorField& dst);
/// y += a*x over raw storage (ghosts included; harmless, they get refilled).
void axpy(double a, const VectorField& x, VectorField& y);
void axpy(double a, const ScalarField& x, ScalarField& y);
void scale(VectorField& v, double a);

}  // namespace cns

#endif
