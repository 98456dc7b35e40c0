#ifndef CNS_TEST_SUPPORT_HPP
#define CNS_TEST_SUPPORT_HPP

// Shared helpers for the test mains: hard REQUIRE macros (never compiled
// out), seeded random fields, and tolerant comparisons.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>

#include "cns/grid.hpp"
#include "cns/operators.hpp"

#define REQUIRE(cond, msg)                                                        \
    do {                                                                          \
        if (!(cond)) {                                                            \
            std::fprintf(stderr, "[FAIL] %s:%d  %s\n", __FILE__, __LINE__, msg);  \
            std::exit(1);                                                         \
        }                                                                         \
    } while (0)

#define REQUIRE_CLOSE(a, b, tol, msg)                                             \
    do {                                                                          \
        const double _a = (a), _b = (b), _t = (tol);                              \
        if (!(std::fabs(_a - _b) <= _t)) {                                        \
            std::fprintf(stderr, "[FAIL] %s:%d  %s  (%.17g vs %.17g, tol %.3g)\n",\
                         __FILE__, __LINE__, msg, _a, _b, _t);                    \
            std::exit(1);                                                         \
        }                                                                         \
    } while (0)

namespace cns::test {

inline void pass(const std::string& what) { std::printf("[PASS] %s\n", what.c_str()); }

inline std::mt19937_64 rng(unsigned seed = 12345) { return std::mt19937_64(seed); }

inline ScalarField random_scalar(const Grid& g, std::mt19937_64& eng, double lo = 0.5,
                                 double hi = 2.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    ScalarField f(g);
    const int n2 = g.dim == 3 ? g.cells[2] : 1;
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) f(i, j, k) = dist(eng);
    fill_ghosts(f, BC::neumann_zero);
    return f;
}

// random no-slip velocity: interior faces random, wall faces zero
inline VectorField random_velocity(const Grid& g, std::mt19937_64& eng, double amp = 1.0) {
    std::uniform_real_distribution<double> dist(-amp, amp);
    VectorField v(g);
    for (int c = 0; c < g.dim; ++c) {
        const int n0 = g.cells[0] + (c == 0 ? 1 : 0);
        const int n1 = g.cells[1] + (c == 1 ? 1 : 0);
        const int n2 = g.dim == 3 ? g.cells[2] + (c == 2 ? 1 : 0) : 1;
        for (int k = 0; k < n2; ++k)
            for (int j = 0; j < n1; ++j)
                for (int i = 0; i < n0; ++i) v.comp(c, i, j, k) = dist(eng);
    }
    fill_ghosts(v, BC::dirichlet_zero);  // pins the wall faces back to zero
    return v;
}

inline double rel_err(double a, double b) {
    const double d = std::fabs(a - b);
    const double s = std::fmax(std::fabs(a), std::fabs(b));
    return s > 0.0 ? d / s : d;
}

}  // namespace cns::test

#endif
