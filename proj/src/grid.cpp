#include "phplate/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace phplate {

void PlateParams::validate() const {
    if (!(rho_A > 0.0)) throw std::invalid_argument("rho_A must be > 0");
    if (!(D_E > 0.0)) throw std::invalid_argument("D_E must be > 0");
    if (!(nu >= 0.0 && nu < 0.5)) throw std::invalid_argument("nu must lie in [0, 0.5)");
    if (!(L1 > 0.0)) throw std::invalid_argument("L1 must be > 0");
    if (!(L2 > 0.0)) throw std::invalid_argument("L2 must be > 0");
}

void Grid::init() {
    if (N1 < 9 || N2 < 9)
        throw std::invalid_argument("grid too small: need N1 >= 9 and N2 >= 9 so the "
                                    "interior 4th-derivative stencils and two ghost layers fit");
    if (!(L1 > 0.0 && L2 > 0.0)) throw std::invalid_argument("side lengths must be > 0");
    dz1 = L1 / (N1 - 1);
    dz2 = L2 / (N2 - 1);
}

std::vector<double> central_coeffs(int k, double h, int& width) {
    switch (k) {
        case 0:
            width = 0;
            return {1.0};
        case 1:
            width = 1;
            return {-0.5 / h, 0.0, 0.5 / h};
        case 2:
            width = 1;
            return {1.0 / (h * h), -2.0 / (h * h), 1.0 / (h * h)};
        case 3: {
            double h3 = h * h * h;
            width = 2;
            return {-0.5 / h3, 1.0 / h3, 0.0, -1.0 / h3, 0.5 / h3};
        }
        case 4: {
            double h4 = h * h * h * h;
            width = 2;
            return {1.0 / h4, -4.0 / h4, 6.0 / h4, -4.0 / h4, 1.0 / h4};
        }
        default:
            throw std::invalid_argument("unsupported derivative order " + std::to_string(k) +
                                        " (central stencils cover order <= 4)");
    }
}

Field partial(const GhostField& f, MultiIndex J, const Grid& g) {
    if (J.j1 < 0 || J.j2 < 0 || J.order() > 4 || J.j1 > 4 || J.j2 > 4)
        throw std::invalid_argument("unsupported multi-index order (need #J <= 4)");
    if (f.n1() != g.N1 || f.n2() != g.N2) throw std::invalid_argument("field/grid shape mismatch");

    int w1 = 0, w2 = 0;
    std::vector<double> c1 = central_coeffs(J.j1, g.dz1, w1);
    std::vector<double> c2 = central_coeffs(J.j2, g.dz2, w2);

    Field out(g.N1, g.N2);
    for (int i = 0; i < g.N1; ++i) {
        for (int j = 0; j < g.N2; ++j) {
            double s = 0.0;
            for (int a = -w1; a <= w1; ++a) {
                double ca = c1[(size_t)(a + w1)];
                if (ca == 0.0) continue;
                double t = 0.0;
                for (int b = -w2; b <= w2; ++b) {
                    double cb = c2[(size_t)(b + w2)];
                    if (cb == 0.0) continue;
                    t += cb * f(i + a, j + b);
                }
                s += ca * t;
            }
            out(i, j) = s;
        }
    }
    return out;
}

double integrate_domain(const Field& f, const Grid& g) {
    if (f.n1() != g.N1 || f.n2() != g.N2) throw std::invalid_argument("field/grid shape mismatch");
    // row sums first so quadrature order is fixed and reproducible
    double total = 0.0;
    for (int i = 0; i < g.N1; ++i) {
        double row = 0.0;
        for (int j = 0; j < g.N2; ++j) row += Grid::trapw(j, g.N2) * f(i, j);
        total += Grid::trapw(i, g.N1) * row;
    }
    return total * g.dz1 * g.dz2;
}

double integrate_edge(const EdgeProfile& p, const Grid& g) {
    int n = g.edge_len(p.edge);
    if (p.size() != n) throw std::invalid_argument("edge profile length mismatch");
    double h = (p.edge == Edge::B1 || p.edge == Edge::B3) ? g.dz2 : g.dz1;
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += Grid::trapw(k, n) * p[k];
    return s * h;
}

GhostField sample_extended(const std::function<double(double, double)>& f, const Grid& g) {
    GhostField x(g.N1, g.N2);
    for (int i = -2; i < g.N1 + 2; ++i)
        for (int j = -2; j < g.N2 + 2; ++j) x(i, j) = f(g.z1(i), g.z2(j));
    return x;
}

Field sample(const std::function<double(double, double)>& f, const Grid& g) {
    Field x(g.N1, g.N2);
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) x(i, j) = f(g.z1(i), g.z2(j));
    return x;
}

EdgeProfile edge_trace(const Field& f, Edge e, const Grid& g) {
    EdgeProfile p(e, g.edge_len(e));
    switch (e) {
        case Edge::B1:
            for (int j = 0; j < g.N2; ++j) p[j] = f(0, j);
            break;
        case Edge::B3:
            for (int j = 0; j < g.N2; ++j) p[j] = f(g.N1 - 1, j);
            break;
        case Edge::B2:
            for (int i = 0; i < g.N1; ++i) p[i] = f(i, 0);
            break;
        case Edge::B4:
            for (int i = 0; i < g.N1; ++i) p[i] = f(i, g.N2 - 1);
            break;
    }
    return p;
}

} // namespace phplate
