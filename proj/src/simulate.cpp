#include "phplate/simulate.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace phplate {

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(T >= 0.0)) throw std::invalid_argument("T must be >= 0");
    if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
    if (!(solver_tol > 0.0)) throw std::invalid_argument("solver_tol must be > 0");
    if (snapshot_every < 0) throw std::invalid_argument("snapshot_every must be >= 0");
}

void SimSetup::finalize() {
    plate.validate();
    act.validate();
    eq.validate();
    sim.validate();
    obs.validate();
    if (grid.L1 != plate.L1 || grid.L2 != plate.L2) {
        grid.L1 = plate.L1;
        grid.L2 = plate.L2;
        grid.init();
    }
    ObserverParams::measurement_node(grid); // enforces N1 = 1 mod 4
    if ((grid.N2 - 1) % 2 != 0)
        throw std::invalid_argument("probe node L2/2 is not on the grid (need odd N2)");
    if (std::isnan(ctrl.xc1_d) || std::isnan(ctrl.xc2_d)) {
        auto lam = lambda_samples(act, grid);
        auto wd = desired_samples(eq, grid);
        auto sp = controller_setpoints(lam, wd, grid);
        ctrl.xc1_d = sp.first;
        ctrl.xc2_d = sp.second;
    }
    ctrl.validate();
    finalized = true;
}

double RunResult::casimir_drift(int channel) const {
    if (audits.empty()) return 0.0;
    double c0 = channel == 0 ? audits.front().C1 : audits.front().C2;
    double m = 0.0;
    for (const auto& a : audits) {
        double c = channel == 0 ? a.C1 : a.C2;
        m = std::max(m, std::abs(c - c0));
    }
    return m;
}

double RunResult::max_abs_xc(int channel) const {
    // reconstructed from the recorded Casimir values and edge integrals is
    // not needed; the audit keeps xc implicitly via C + integral, so track
    // the larger of the recorded magnitudes instead
    double m = 0.0;
    for (const auto& a : audits) m = std::max(m, std::abs(channel == 0 ? a.C1 : a.C2));
    return m;
}

Simulator::Simulator(const SimSetup& setup, RunMode mode) : su_(setup), mode_(mode) {
    if (!su_.finalized) su_.finalize();
    if (mode_ != RunMode::OpenLoop && su_.bc.is_simply_supported())
        throw std::invalid_argument("controlled modes need the actuated boundary layout");
    model_ = std::make_unique<PlateModel>(su_.grid, su_.plate, su_.bc);
    lambda_ = lambda_samples(su_.act, su_.grid);
    wd_ = desired_samples(su_.eq, su_.grid);
    dirac_ = dirac_weights(su_.grid, su_.obs.mollify);
    im_ = ObserverParams::measurement_node(su_.grid);
    probe_i_ = su_.grid.N1 - 1;
    probe_j_ = (su_.grid.N2 - 1) / 2;
    build_dof_map();
    assemble();
    verify_assembly();
}

void Simulator::build_dof_map() {
    const Grid& g = su_.grid;
    node_slot_.assign((size_t)g.N1 * g.N2, -1);
    act_nodes_.clear();
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j)
            if (!model_->pinned(i, j)) {
                node_slot_[(size_t)i * g.N2 + j] = (int)act_nodes_.size();
                act_nodes_.push_back(i * g.N2 + j);
            }
    na_ = (int)act_nodes_.size();
    dim_ = 2 * na_;
    if (mode_ != RunMode::OpenLoop) dim_ += 4;
    if (mode_ == RunMode::ControlledObserver) dim_ += 2 * na_;
}

Simulator::Vec Simulator::pack_plant(const PlantState& s) const {
    Vec x(2 * na_);
    const Grid& g = su_.grid;
    for (int k = 0; k < na_; ++k) {
        int i = act_nodes_[(size_t)k] / g.N2, j = act_nodes_[(size_t)k] % g.N2;
        x[k] = s.w(i, j);
        x[na_ + k] = s.p(i, j);
    }
    return x;
}

void Simulator::unpack_plant(const Vec& x, PlantState& s) const {
    const Grid& g = su_.grid;
    s.w = Field(g.N1, g.N2);
    s.p = Field(g.N1, g.N2);
    for (int k = 0; k < na_; ++k) {
        int i = act_nodes_[(size_t)k] / g.N2, j = act_nodes_[(size_t)k] % g.N2;
        s.w(i, j) = x[k];
        s.p(i, j) = x[na_ + k];
    }
}

Simulator::Vec Simulator::pack_obs(const ObserverState& s) const {
    PlantState t{s.w_hat, s.p_hat};
    return pack_plant(t);
}

void Simulator::unpack_obs(const Vec& x, ObserverState& s) const {
    PlantState t;
    unpack_plant(x, t);
    s.w_hat = t.w;
    s.p_hat = t.p;
}

Simulator::Vec Simulator::pack(const CoupledState& s) const {
    Vec x = Vec::Zero(dim_);
    x.head(2 * na_) = pack_plant(s.plant);
    if (mode_ != RunMode::OpenLoop)
        for (int k = 0; k < 4; ++k) x[2 * na_ + k] = s.ctrl.xc[(size_t)k];
    if (mode_ == RunMode::ControlledObserver) x.tail(2 * na_) = pack_obs(s.obs);
    return x;
}

CoupledState Simulator::unpack(const Vec& x) const {
    CoupledState s;
    unpack_plant(x.head(2 * na_), s.plant);
    if (mode_ != RunMode::OpenLoop)
        for (int k = 0; k < 4; ++k) s.ctrl.xc[(size_t)k] = x[2 * na_ + k];
    if (mode_ == RunMode::ControlledObserver)
        unpack_obs(x.tail(2 * na_), s.obs);
    else {
        s.obs.w_hat = Field(su_.grid.N1, su_.grid.N2);
        s.obs.p_hat = Field(su_.grid.N1, su_.grid.N2);
    }
    return s;
}

void Simulator::coupled_rhs(const CoupledState& s, CoupledState& ds) const {
    const Grid& g = su_.grid;
    Vec2 u{0.0, 0.0};
    if (mode_ != RunMode::OpenLoop) {
        Vec2 yc = controller_outputs(s.ctrl, su_.ctrl);
        u = {-yc[0], -yc[1]};
    }
    EdgeLoads loads = EdgeLoads::zero(g.N1);
    for (int i = 0; i < g.N1; ++i) {
        loads.bottom[(size_t)i] = lambda_[(size_t)i] * u[0];
        loads.top[(size_t)i] = lambda_[(size_t)i] * u[1];
    }
    model_->rhs(s.plant, loads, ds.plant);

    if (mode_ != RunMode::OpenLoop) {
        const Field& psrc = (mode_ == RunMode::ControlledObserver) ? s.obs.p_hat : s.plant.p;
        Vec2 uc = interconnect(psrc, lambda_, g, su_.plate.rho_A);
        ds.ctrl.xc = controller_rhs(s.ctrl, uc, su_.ctrl);
    } else {
        ds.ctrl.xc = {0.0, 0.0, 0.0, 0.0};
    }

    if (mode_ == RunMode::ControlledObserver) {
        Vec2 kh{0.0, 0.0};
        if (su_.obs.correction_enabled) {
            Measurements m = Measurements::take(s.plant, g, su_.plate.rho_A);
            kh = correction_terms(m, s.obs, su_.obs, g, su_.plate.rho_A);
        }
        kh[0] += k_offset_[0];
        kh[1] += k_offset_[1];
        observer_rhs(s.obs, u, kh, lambda_, *model_, su_.obs, ds.obs);
    } else {
        ds.obs.w_hat = Field(g.N1, g.N2);
        ds.obs.p_hat = Field(g.N1, g.N2);
    }
}

void Simulator::assemble() {
    const Grid& g = su_.grid;
    const ControllerParams& c = su_.ctrl;
    using Trip = Eigen::Triplet<double>;

    // --- plant self block: [[0, I/rhoA],[ -M^-1 K, 0 ]] with K probed from
    // the bending force and symmetrized so the discrete energy is conserved
    // exactly by the midpoint rule
    std::vector<Trip> tK;
    {
        Field w(g.N1, g.N2);
        for (int k = 0; k < na_; ++k) {
            int i = act_nodes_[(size_t)k] / g.N2, j = act_nodes_[(size_t)k] % g.N2;
            w(i, j) = 1.0;
            Field f = kernels::bending_force(w, model_->closure(), su_.plate);
            w(i, j) = 0.0;
            for (int r = 0; r < na_; ++r) {
                int ri = act_nodes_[(size_t)r] / g.N2, rj = act_nodes_[(size_t)r] % g.N2;
                double v = f(ri, rj);
                // force = -M^-1 K w  =>  K(r,k) = -M_r * f_r
                if (v != 0.0) tK.emplace_back(r, k, -g.nodew(ri, rj) * g.dz1 * g.dz2 * v);
            }
        }
    }
    SpMat K(na_, na_);
    K.setFromTriplets(tK.begin(), tK.end());
    SpMat Kt = SpMat(K.transpose());
    K = 0.5 * (K + Kt);

    std::vector<Trip> tA;
    for (int k = 0; k < na_; ++k) tA.emplace_back(k, na_ + k, 1.0 / su_.plate.rho_A);
    for (int col = 0; col < K.outerSize(); ++col)
        for (SpMat::InnerIterator it(K, col); it; ++it) {
            int r = (int)it.row();
            int ri = act_nodes_[(size_t)r] / g.N2, rj = act_nodes_[(size_t)r] % g.N2;
            double minv = 1.0 / (g.nodew(ri, rj) * g.dz1 * g.dz2);
            tA.emplace_back(na_ + r, (int)it.col(), -minv * it.value());
        }
    A_pp_ = SpMat(2 * na_, 2 * na_);
    A_pp_.setFromTriplets(tA.begin(), tA.end());

    // --- voltage load columns (p rows, per unit voltage on each channel)
    {
        std::vector<Trip> t;
        double lc = 2.0 / g.dz2;
        for (int i = 0; i < g.N1; ++i) {
            int kb = node_slot_[(size_t)i * g.N2 + 0];
            int kt = node_slot_[(size_t)i * g.N2 + (g.N2 - 1)];
            if (kb >= 0 && lambda_[(size_t)i] != 0.0) t.emplace_back(na_ + kb, 0, lc * lambda_[(size_t)i]);
            if (kt >= 0 && lambda_[(size_t)i] != 0.0) t.emplace_back(na_ + kt, 1, lc * lambda_[(size_t)i]);
        }
        load_cols_ = SpMat(2 * na_, 2);
        load_cols_.setFromTriplets(t.begin(), t.end());
    }

    // --- controller coupling
    Eigen::Matrix<double, 2, 4> dy = Eigen::Matrix<double, 2, 4>::Zero();
    dy(0, 0) = c.c1;
    dy(1, 1) = c.c2;
    dy(0, 2) = c.G31 * c.Mc33 + c.G41 * c.Mc34;
    dy(0, 3) = c.G31 * c.Mc34 + c.G41 * c.Mc44;
    dy(1, 2) = c.G32 * c.Mc33 + c.G42 * c.Mc34;
    dy(1, 3) = c.G32 * c.Mc34 + c.G42 * c.Mc44;
    B_pc_ = load_cols_ * (-dy).sparseView();

    Eigen::Vector2d ucon(c.c1 * c.xc1_d + c.us1, c.c2 * c.xc2_d + c.us2);
    b_p_ = load_cols_ * ucon;

    A_cc_ = Eigen::Matrix4d::Zero();
    A_cc_(2, 2) = -c.Rc33 * c.Mc33 + (c.Jc34 - c.Rc34) * c.Mc34;
    A_cc_(2, 3) = -c.Rc33 * c.Mc34 + (c.Jc34 - c.Rc34) * c.Mc44;
    A_cc_(3, 2) = (-c.Jc34 - c.Rc34) * c.Mc33 - c.Rc44 * c.Mc34;
    A_cc_(3, 3) = (-c.Jc34 - c.Rc34) * c.Mc34 - c.Rc44 * c.Mc44;

    // u_c rows: edge quadrature of lambda * p / rho_A
    {
        std::vector<Trip> t;
        for (int i = 0; i < g.N1; ++i) {
            double wq = Grid::trapw(i, g.N1) * g.dz1 * lambda_[(size_t)i] / su_.plate.rho_A;
            if (wq == 0.0) continue;
            int kb = node_slot_[(size_t)i * g.N2 + 0];
            int kt = node_slot_[(size_t)i * g.N2 + (g.N2 - 1)];
            if (kb >= 0) {
                t.emplace_back(0, na_ + kb, wq);
                t.emplace_back(2, na_ + kb, c.G31 * wq);
                t.emplace_back(3, na_ + kb, c.G41 * wq);
            }
            if (kt >= 0) {
                t.emplace_back(1, na_ + kt, wq);
                t.emplace_back(2, na_ + kt, c.G32 * wq);
                t.emplace_back(3, na_ + kt, c.G42 * wq);
            }
        }
        C_cp_ = SpMat(4, 2 * na_);
        C_cp_.setFromTriplets(t.begin(), t.end());
    }
    C_co_ = C_cp_;

    // --- observer corrections
    if (mode_ == RunMode::ControlledObserver && su_.obs.correction_enabled) {
        const ObserverParams& o = su_.obs;
        int m1 = node_slot_[(size_t)im_ * g.N2 + 0];
        int m2 = node_slot_[(size_t)im_ * g.N2 + (g.N2 - 1)];
        if (m1 < 0 || m2 < 0) throw std::logic_error("measurement node pinned");
        std::vector<Trip> tself, tcross;
        const double lc = 2.0 / g.dz2;
        for (int i = 0; i < g.N1; ++i) {
            double d = dirac_[(size_t)i];
            if (d == 0.0) continue;
            int kb = node_slot_[(size_t)i * g.N2 + 0];
            int kt = node_slot_[(size_t)i * g.N2 + (g.N2 - 1)];
            // bottom channel: load -= d * k1_hat, k1_hat affine in states
            if (kb >= 0) {
                tcross.emplace_back(na_ + kb, m1, lc * d * o.k1);                       // w(m1)
                tcross.emplace_back(na_ + kb, na_ + m1, lc * d * o.Kd11 / su_.plate.rho_A); // p(m1)
                tself.emplace_back(na_ + kb, m1, -lc * d * o.k1);                        // w_hat(m1)
                tself.emplace_back(na_ + kb, na_ + m1, -lc * d * o.Kd11 / su_.plate.rho_A);
            }
            if (kt >= 0) {
                tcross.emplace_back(na_ + kt, m2, lc * d * o.k2);
                tcross.emplace_back(na_ + kt, na_ + m2, lc * d * o.Kd22 / su_.plate.rho_A);
                tself.emplace_back(na_ + kt, m2, -lc * d * o.k2);
                tself.emplace_back(na_ + kt, na_ + m2, -lc * d * o.Kd22 / su_.plate.rho_A);
            }
        }
        C_op_ = SpMat(2 * na_, 2 * na_);
        C_op_.setFromTriplets(tcross.begin(), tcross.end());
        SpMat dO(2 * na_, 2 * na_);
        dO.setFromTriplets(tself.begin(), tself.end());
        if (dO.nonZeros() > 0)
            A_oo_ = A_pp_ + dO;
        else
            A_oo_ = A_pp_;
    } else {
        C_op_ = SpMat(2 * na_, 2 * na_);
        A_oo_ = (mode_ == RunMode::ControlledObserver) ? A_pp_ : SpMat(0, 0);
    }

    // --- full operator for verification and external use
    {
        std::vector<Trip> t;
        auto add_block = [&](const SpMat& M, int r0, int c0) {
            for (int col = 0; col < M.outerSize(); ++col)
                for (SpMat::InnerIterator it(M, col); it; ++it)
                    t.emplace_back(r0 + (int)it.row(), c0 + (int)it.col(), it.value());
        };
        b_full_ = Vec::Zero(dim_);
        add_block(A_pp_, 0, 0);
        if (mode_ != RunMode::OpenLoop) {
            add_block(B_pc_, 0, 2 * na_);
            for (int r = 0; r < 4; ++r)
                for (int cc = 0; cc < 4; ++cc)
                    if (A_cc_(r, cc) != 0.0) t.emplace_back(2 * na_ + r, 2 * na_ + cc, A_cc_(r, cc));
            b_full_.head(2 * na_) = b_p_;
        }
        if (mode_ == RunMode::Controlled) add_block(C_cp_, 2 * na_, 0);
        if (mode_ == RunMode::ControlledObserver) {
            int o0 = 2 * na_ + 4;
            add_block(C_co_, 2 * na_, o0);
            add_block(A_oo_, o0, o0);
            add_block(B_pc_, o0, 2 * na_);
            add_block(C_op_, o0, 0);
            b_full_.segment(o0, 2 * na_) = b_p_;
            // test hook: constant correction offset
            if (k_offset_[0] != 0.0 || k_offset_[1] != 0.0) {
                // handled at run time in b; nothing here
            }
        }
        A_full_ = SpMat(dim_, dim_);
        A_full_.setFromTriplets(t.begin(), t.end());
    }
}

void Simulator::verify_assembly() const {
    std::mt19937 rng(12345);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        Vec x(dim_);
        for (int k = 0; k < dim_; ++k) x[k] = dist(rng);
        CoupledState s = unpack(x), ds;
        coupled_rhs(s, ds);
        Vec r1 = pack(ds);
        Vec r2 = A_full_ * x + b_full_;
        double scale = r1.lpNorm<Eigen::Infinity>();
        double err = (r1 - r2).lpNorm<Eigen::Infinity>();
        if (err > 1e-10 * std::max(1.0, scale)) {
            std::ostringstream os;
            os << "assembled operator disagrees with the modular right-hand side: |diff|=" << err
               << " scale=" << scale;
            throw std::logic_error(os.str());
        }
    }
}

CoupledState Simulator::initial_state() const {
    const Grid& g = su_.grid;
    CoupledState s;
    s.plant = PlantState(g.N1, g.N2);
    s.obs = ObserverState(g.N1, g.N2);
    if (mode_ == RunMode::ControlledObserver) {
        for (int i = 0; i < g.N1; ++i)
            for (int j = 0; j < g.N2; ++j)
                s.obs.w_hat(i, j) = -su_.obs_init_d * g.z1(i) * g.z1(i);
        for (int j = 0; j < g.N2; ++j) s.obs.w_hat(0, j) = 0.0;
    }
    return s;
}

struct Simulator::Stepper {
    using SpMat = Simulator::SpMat;
    using Vec = Simulator::Vec;
    double h = 0.0;
    int na2 = 0;
    RunMode mode;
    SpMat P, O, Qp, Qo; // (I -/+ h/2 A) for the two distributed blocks
    Eigen::SparseLU<SpMat> luP, luO;
    bool shared_factor = false; // O identical to P (zero-gain observer)
    Eigen::MatrixXd XB, Y;      // P^-1 (h/2 B), O^-1 (h/2 B + h/2 C_op XB)
    Eigen::Matrix4d S;          // Schur complement for the controller states
    Eigen::PartialPivLU<Eigen::Matrix4d> luS;
    Eigen::Matrix4d Qcc;        // I + h/2 A_cc
};

RunResult Simulator::run_from(const CoupledState& x0) { return integrate(x0, nullptr); }

RunResult Simulator::run_forced(const std::function<Vec2(double)>& voltage) {
    if (mode_ != RunMode::OpenLoop)
        throw std::invalid_argument("forced voltages are an open-loop facility");
    return integrate(initial_state(), &voltage);
}

RunResult Simulator::integrate(const CoupledState& x0, const std::function<Vec2(double)>* voltage) {
    const SimConfig& sc = su_.sim;
    const double h = sc.dt;
    const int steps = (int)std::llround(sc.T / h);
    const Grid& g = su_.grid;

    Stepper st;
    st.h = h;
    st.na2 = 2 * na_;
    st.mode = mode_;
    SpMat I(2 * na_, 2 * na_);
    I.setIdentity();
    st.P = I - (h / 2.0) * A_pp_;
    st.Qp = I + (h / 2.0) * A_pp_;
    st.luP.compute(st.P);
    if (st.luP.info() != Eigen::Success)
        throw std::runtime_error("midpoint operator factorization failed (check boundary setup)");
    if (mode_ != RunMode::OpenLoop) {
        Eigen::MatrixXd Bd = Eigen::MatrixXd(B_pc_) * (h / 2.0);
        st.XB = st.luP.solve(Bd);
        st.Qcc = Eigen::Matrix4d::Identity() + (h / 2.0) * A_cc_;
    }
    if (mode_ == RunMode::Controlled) {
        Eigen::Matrix4d S = Eigen::Matrix4d::Identity() - (h / 2.0) * A_cc_;
        S -= (h / 2.0) * (C_cp_ * st.XB);
        st.S = S;
        st.luS.compute(S);
    } else if (mode_ == RunMode::ControlledObserver) {
        st.shared_factor = (C_op_.nonZeros() == 0);
        st.O = I - (h / 2.0) * A_oo_;
        st.Qo = I + (h / 2.0) * A_oo_;
        if (!st.shared_factor) {
            st.luO.compute(st.O);
            if (st.luO.info() != Eigen::Success)
                throw std::runtime_error("observer midpoint factorization failed");
            Eigen::MatrixXd R = Eigen::MatrixXd(B_pc_) * (h / 2.0) + (h / 2.0) * (C_op_ * st.XB);
            st.Y = st.luO.solve(R);
        } else {
            st.Y = st.XB;
        }
        Eigen::Matrix4d S = Eigen::Matrix4d::Identity() - (h / 2.0) * A_cc_;
        S -= (h / 2.0) * (C_co_ * st.Y);
        st.S = S;
        st.luS.compute(S);
    }

    RunResult out;
    out.record_dt = h * sc.record_every;

    Vec xp = pack_plant(x0.plant);
    Eigen::Vector4d xc = Eigen::Vector4d::Zero();
    if (mode_ != RunMode::OpenLoop)
        for (int k = 0; k < 4; ++k) xc[k] = x0.ctrl.xc[(size_t)k];
    Vec xo;
    Vec b_obs;
    if (mode_ == RunMode::ControlledObserver) {
        xo = pack_obs(x0.obs);
        b_obs = b_p_;
        if (k_offset_[0] != 0.0 || k_offset_[1] != 0.0) {
            // constant correction offset enters the observer load with the
            // same footprint as k_hat itself
            Vec extra = Vec::Zero(2 * na_);
            const double lc = 2.0 / g.dz2;
            for (int i = 0; i < g.N1; ++i) {
                double d = dirac_[(size_t)i];
                if (d == 0.0) continue;
                int kb = node_slot_[(size_t)i * g.N2 + 0];
                int kt = node_slot_[(size_t)i * g.N2 + (g.N2 - 1)];
                if (kb >= 0) extra[na_ + kb] -= lc * d * k_offset_[0];
                if (kt >= 0) extra[na_ + kt] -= lc * d * k_offset_[1];
            }
            b_obs = b_p_ + extra;
        }
    }

    auto record = [&](int step) {
        CoupledState s;
        unpack_plant(xp, s.plant);
        if (mode_ != RunMode::OpenLoop)
            for (int k = 0; k < 4; ++k) s.ctrl.xc[(size_t)k] = xc[k];
        if (mode_ == RunMode::ControlledObserver) unpack_obs(xo, s.obs);
        double t = step * h;
        Vec2 u{0.0, 0.0};
        if (mode_ != RunMode::OpenLoop) {
            Vec2 yc = controller_outputs(s.ctrl, su_.ctrl);
            u = {-yc[0], -yc[1]};
        } else if (voltage) {
            u = (*voltage)(t);
        }
        if (!s.plant.all_finite() || (mode_ == RunMode::ControlledObserver && !s.obs.all_finite()))
            throw std::runtime_error("state diverged (non-finite values) at step " + std::to_string(step));
        out.audits.push_back(audit(s, t, u));
        std::vector<double> prof((size_t)g.N1);
        for (int i = 0; i < g.N1; ++i) prof[(size_t)i] = s.plant.w(i, 0);
        out.edge_profiles.push_back(std::move(prof));
        bool snap = (step == 0 || step == steps ||
                     (sc.snapshot_every > 0 && step % sc.snapshot_every == 0));
        if (snap) out.snapshots.emplace_back(t, s.plant.w);
        if (step == steps) out.final_state = s;
    };

    record(0);
    Vec rp(2 * na_), tp(2 * na_), ro, to;
    for (int step = 1; step <= steps; ++step) {
        if (mode_ == RunMode::OpenLoop) {
            rp = st.Qp * xp;
            if (voltage) {
                Vec2 u = (*voltage)((step - 0.5) * h);
                Eigen::Vector2d uv(u[0], u[1]);
                rp += h * (load_cols_ * uv);
            }
            xp = st.luP.solve(rp);
        } else if (mode_ == RunMode::Controlled) {
            rp = st.Qp * xp + (h / 2.0) * (B_pc_ * xc) + h * b_p_;
            Eigen::Vector4d rc = st.Qcc * xc + (h / 2.0) * (C_cp_ * xp);
            tp = st.luP.solve(rp);
            Eigen::Vector4d xcn = st.luS.solve(rc + (h / 2.0) * (C_cp_ * tp));
            xp = tp + st.XB * xcn;
            xc = xcn;
        } else {
            rp = st.Qp * xp + (h / 2.0) * (B_pc_ * xc) + h * b_p_;
            tp = st.luP.solve(rp);
            if (st.shared_factor) {
                ro = st.Qo * xo + (h / 2.0) * (B_pc_ * xc) + h * b_obs;
                to = st.luP.solve(ro);
            } else {
                ro = st.Qo * xo + (h / 2.0) * (B_pc_ * xc) + (h / 2.0) * (C_op_ * xp) + h * b_obs;
                to = st.luO.solve(ro + (h / 2.0) * (C_op_ * tp));
            }
            Eigen::Vector4d rc = st.Qcc * xc + (h / 2.0) * (C_co_ * xo);
            Eigen::Vector4d xcn = st.luS.solve(rc + (h / 2.0) * (C_co_ * to));
            xp = tp + st.XB * xcn;
            xo = to + st.Y * xcn;
            xc = xcn;
        }

        if (step % sc.record_every == 0 || step == steps) {
            // solver residual of the plant-block equation
            Vec res = st.P * xp - rp;
            if (mode_ != RunMode::OpenLoop) res -= (h / 2.0) * (B_pc_ * xc);
            double rn = res.lpNorm<Eigen::Infinity>() /
                        std::max(1.0, rp.lpNorm<Eigen::Infinity>());
            out.max_solver_residual = std::max(out.max_solver_residual, rn);
            record(step);
        }
    }

    // centered power-balance residuals over the uniform record grid
    if (out.audits.size() >= 3) {
        std::vector<double> H, P;
        H.reserve(out.audits.size());
        P.reserve(out.audits.size());
        // the trailing record may be off-cadence when steps % record_every != 0
        size_t n_uniform = out.audits.size();
        if (steps % sc.record_every != 0) --n_uniform;
        for (size_t k = 0; k < n_uniform; ++k) {
            H.push_back(out.audits[k].H);
            P.push_back(out.audits[k].port_power);
        }
        if (H.size() >= 3) out.balance_residuals = power_balance_residual(H, P, out.record_dt);
    }
    return out;
}

AuditRecord Simulator::audit(const CoupledState& s, double t, const Vec2& u) const {
    const Grid& g = su_.grid;
    AuditRecord a;
    a.t = t;
    a.H = model_->total_energy(s.plant);
    if (mode_ != RunMode::OpenLoop) {
        a.Hc = hc_value(s.ctrl, su_.ctrl);
        EdgeProfile lb(Edge::B2, g.N1), lt(Edge::B4, g.N1);
        for (int i = 0; i < g.N1; ++i) {
            lb[i] = lambda_[(size_t)i] * s.plant.w(i, 0);
            lt[i] = lambda_[(size_t)i] * s.plant.w(i, g.N2 - 1);
        }
        a.C1 = s.ctrl.xc[0] - integrate_edge(lb, g);
        a.C2 = s.ctrl.xc[1] - integrate_edge(lt, g);
    }
    a.Hcl = a.H + a.Hc;
    if (mode_ == RunMode::ControlledObserver) {
        auto he = error_energies(s.plant, s.obs, su_.obs, *model_);
        a.Htilde = he.first;
        a.Htilde_d = he.second;
        a.w_hat_probe = s.obs.w_hat(probe_i_, probe_j_);
    }
    a.port_power = model_->port_power(s.plant);
    a.u1 = u[0];
    a.u2 = u[1];
    a.w_m1 = s.plant.w(im_, 0);
    a.w_m2 = s.plant.w(im_, g.N2 - 1);
    a.w_probe = s.plant.w(probe_i_, probe_j_);
    if (mode_ != RunMode::OpenLoop) a.xc = s.ctrl.xc;
    return a;
}

} // namespace phplate
