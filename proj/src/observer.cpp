#include "phplate/observer.hpp"

#include <stdexcept>

namespace phplate {

void ObserverParams::validate() const {
    if (!(k1 > 0.0 && k2 > 0.0)) throw std::invalid_argument("k1, k2 must be > 0");
    if (!(Kd11 > 0.0 && Kd22 > 0.0)) throw std::invalid_argument("Kd11, Kd22 must be > 0");
}

int ObserverParams::measurement_node(const Grid& g) {
    if ((g.N1 - 1) % 4 != 0)
        throw std::invalid_argument("measurement node 3L1/4 is not on the grid (need N1 = 1 mod 4)");
    return 3 * (g.N1 - 1) / 4;
}

Measurements Measurements::take(const PlantState& plant, const Grid& g, double rho_A) {
    int im = ObserverParams::measurement_node(g);
    Measurements m;
    m.ybar1 = plant.w(im, 0);
    m.ybar2 = plant.w(im, g.N2 - 1);
    m.y1 = plant.p(im, 0) / rho_A;
    m.y2 = plant.p(im, g.N2 - 1) / rho_A;
    return m;
}

Vec2 correction_terms(const Measurements& m, const ObserverState& s, const ObserverParams& op,
                      const Grid& g, double rho_A) {
    int im = ObserverParams::measurement_node(g);
    double k1 = -op.k1 * (m.ybar1 - s.w_hat(im, 0)) - op.Kd11 * (m.y1 - s.p_hat(im, 0) / rho_A);
    double k2 = -op.k2 * (m.ybar2 - s.w_hat(im, g.N2 - 1)) -
                op.Kd22 * (m.y2 - s.p_hat(im, g.N2 - 1) / rho_A);
    return {k1, k2};
}

std::vector<double> dirac_weights(const Grid& g, bool mollify) {
    int im = ObserverParams::measurement_node(g);
    std::vector<double> d((size_t)g.N1, 0.0);
    if (!mollify) {
        d[(size_t)im] = 1.0 / (Grid::trapw(im, g.N1) * g.dz1);
        return d;
    }
    // 3-node hat with unit quadrature mass
    double mass = (0.5 * Grid::trapw(im - 1, g.N1) + Grid::trapw(im, g.N1) +
                   0.5 * Grid::trapw(im + 1, g.N1)) *
                  g.dz1;
    d[(size_t)im - 1] = 0.5 / mass;
    d[(size_t)im] = 1.0 / mass;
    d[(size_t)im + 1] = 0.5 / mass;
    return d;
}

void observer_rhs(const ObserverState& s, const Vec2& u, const Vec2& k_hat,
                  const std::vector<double>& lambda, const PlateModel& model,
                  const ObserverParams& op, ObserverState& out) {
    const Grid& g = model.grid();
    std::vector<double> dw = dirac_weights(g, op.mollify);
    EdgeLoads loads = EdgeLoads::zero(g.N1);
    for (int i = 0; i < g.N1; ++i) {
        loads.bottom[(size_t)i] = lambda[(size_t)i] * u[0] - dw[(size_t)i] * k_hat[0];
        loads.top[(size_t)i] = lambda[(size_t)i] * u[1] - dw[(size_t)i] * k_hat[1];
    }
    PlantState tmp{s.w_hat, s.p_hat}, dtmp;
    model.rhs(tmp, loads, dtmp);
    out.w_hat = dtmp.w;
    out.p_hat = dtmp.p;
}

std::pair<double, double> error_energies(const PlantState& plant, const ObserverState& obs,
                                         const ObserverParams& op, const PlateModel& model) {
    const Grid& g = model.grid();
    PlantState err;
    err.w = plant.w - obs.w_hat;
    err.p = plant.p - obs.p_hat;
    double Ht = model.total_energy(err);
    int im = ObserverParams::measurement_node(g);
    double e1 = err.w(im, 0), e2 = err.w(im, g.N2 - 1);
    double Htd = Ht + 0.5 * op.k1 * e1 * e1 + 0.5 * op.k2 * e2 * e2;
    return {Ht, Htd};
}

} // namespace phplate
