#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "phplate/field.hpp"

namespace phplate {

/// Physical constants of the plate.
struct PlateParams {
    double rho_A = 1.0; // mass per unit area
    double D_E = 1.0;   // flexural rigidity
    double nu = 0.2;    // Poisson ratio
    double L1 = 1.0;    // side length along z1
    double L2 = 1.0;    // side length along z2

    void validate() const;
};

/// The four boundary edges of the rectangle.
///   B1: z1 = 0      (clamped in the reference configuration)
///   B2: z2 = 0      (actuated)
///   B3: z1 = L1     (free)
///   B4: z2 = L2     (actuated)
enum class Edge { B1 = 0, B2 = 1, B3 = 2, B4 = 3 };

/// Sign relating the literal shear/moment formulas on an edge to the
/// outward power flow: the energy rate picks up edge terms with this
/// orientation (lower coordinate limits enter with +, upper with -).
inline double edge_orientation(Edge e) {
    switch (e) {
        case Edge::B2: return +1.0;
        case Edge::B4: return -1.0;
        case Edge::B1: return -1.0;
        case Edge::B3: return +1.0;
    }
    return 0.0;
}

/// Uniform tensor-product grid, nodes on the edges.
struct Grid {
    int N1 = 41, N2 = 41;
    double L1 = 1.0, L2 = 1.0;
    double dz1 = 0.0, dz2 = 0.0;

    Grid() { init(); }
    Grid(int n1, int n2, double l1, double l2) : N1(n1), N2(n2), L1(l1), L2(l2) { init(); }

    void init();

    double z1(int i) const { return i * dz1; }
    double z2(int j) const { return j * dz2; }

    /// trapezoid weight of a 1D index within [0, n-1]
    static double trapw(int k, int n) { return (k == 0 || k == n - 1) ? 0.5 : 1.0; }
    /// trapezoid weight of node (i,j)
    double nodew(int i, int j) const { return trapw(i, N1) * trapw(j, N2); }

    int edge_len(Edge e) const { return (e == Edge::B1 || e == Edge::B3) ? N2 : N1; }
};

/// Values along one edge (indexed by the node index of the edge coordinate).
struct EdgeProfile {
    Edge edge = Edge::B2;
    std::vector<double> values;

    EdgeProfile() = default;
    EdgeProfile(Edge e, int n) : edge(e), values((size_t)n, 0.0) {}
    double& operator[](int k) { return values[(size_t)k]; }
    double operator[](int k) const { return values[(size_t)k]; }
    int size() const { return (int)values.size(); }
};

/// Spatial multi-index [j1 j2]: j1 derivatives in z1, j2 in z2.
struct MultiIndex {
    int j1 = 0, j2 = 0;
    int order() const { return j1 + j2; }
};

/// Central-difference approximation of the spatial derivative d^{#J} f,
/// evaluated at every grid node of a ghost-extended field.
/// Second-order accurate; exact on polynomials of degree <= order+1 in
/// the differentiated variable.  Orders above 4 are not supported.
Field partial(const GhostField& f, MultiIndex J, const Grid& g);

/// 1D central-difference coefficients for the k-th derivative (k <= 4),
/// offsets run over [-width, width].
std::vector<double> central_coeffs(int k, double h, int& width);

/// Trapezoid quadrature over the domain.
double integrate_domain(const Field& f, const Grid& g);

/// Trapezoid quadrature along an edge.
double integrate_edge(const EdgeProfile& p, const Grid& g);

/// Sample an analytic function on the extended grid (ghosts included);
/// test and verification helper.
GhostField sample_extended(const std::function<double(double, double)>& f, const Grid& g);

/// Sample on grid nodes only.
Field sample(const std::function<double(double, double)>& f, const Grid& g);

/// Trace of a field along an edge.
EdgeProfile edge_trace(const Field& f, Edge e, const Grid& g);

} // namespace phplate
