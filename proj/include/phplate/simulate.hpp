#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "phplate/actuation.hpp"
#include "phplate/controller.hpp"
#include "phplate/observer.hpp"
#include "phplate/plate.hpp"

namespace phplate {

enum class RunMode { OpenLoop, Controlled, ControlledObserver };

struct SimConfig {
    double dt = 1e-3;
    double T = 40.0;
    int record_every = 10;
    double solver_tol = 1e-12;
    int snapshot_every = 0; // 0: snapshot only the initial and final deflection

    void validate() const;
};

/// One row of the energy/Casimir audit.
struct AuditRecord {
    double t = 0.0;
    double H = 0.0, Hc = 0.0, Hcl = 0.0;
    double Htilde = 0.0, Htilde_d = 0.0;
    double C1 = 0.0, C2 = 0.0;
    double port_power = 0.0;
    double u1 = 0.0, u2 = 0.0;
    double w_m1 = 0.0, w_m2 = 0.0;         // w at the measurement sites
    double w_probe = 0.0, w_hat_probe = 0.0; // w(L1, L2/2) and the observer twin
    Vec4 xc{0.0, 0.0, 0.0, 0.0};
};

struct CoupledState {
    PlantState plant;
    ControllerState ctrl;
    ObserverState obs; // used in ControlledObserver mode only
};

struct RunResult {
    std::vector<AuditRecord> audits;
    std::vector<double> balance_residuals;          // centered, on the record grid
    std::vector<std::vector<double>> edge_profiles; // w along B2 per record
    std::vector<std::pair<double, Field>> snapshots;
    CoupledState final_state;
    double max_solver_residual = 0.0;
    double record_dt = 0.0;

    double casimir_drift(int channel) const; // max_t |C(t) - C(0)|
    double max_abs_xc(int channel) const;
};

/// Everything a run needs; the controller set-points are filled from the
/// actuator and target profiles unless given explicitly.
struct SimSetup {
    Grid grid;
    PlateParams plate;
    BoundaryConditions bc; // plate layout; simply supported is test-only
    ActuatorParams act;
    EquilibriumParams eq;
    ControllerParams ctrl;
    ObserverParams obs;
    SimConfig sim;
    double obs_init_d = 0.05;

    void finalize(); // validates and computes derived quantities
    bool finalized = false;
};

/// Coupled plant / controller / observer integrator: the full linear system
/// is assembled once (by probing the modular right-hand sides), factorized,
/// and advanced with the implicit midpoint rule.  The controller unknowns are
/// eliminated through a 4x4 Schur complement so both distributed blocks reuse
/// plant-sized factorizations.
class Simulator {
public:
    using SpMat = Eigen::SparseMatrix<double>;
    using Vec = Eigen::VectorXd;

    Simulator(const SimSetup& setup, RunMode mode);

    /// standard initial state: plant and controller at rest, observer at
    /// w_hat = -d z1^2 when enabled
    CoupledState initial_state() const;

    RunResult run() { return run_from(initial_state()); }
    RunResult run_from(const CoupledState& x0);

    /// open-loop run with prescribed actuator voltages u(t)
    RunResult run_forced(const std::function<Vec2(double)>& voltage);

    /// modular coupled right-hand side (the probing oracle)
    void coupled_rhs(const CoupledState& s, CoupledState& ds) const;

    /// assembled full operator: dX/dt = A X + b in the flat state layout
    const SpMat& A() const { return A_full_; }
    const Vec& b() const { return b_full_; }

    int state_dim() const { return dim_; }
    Vec pack(const CoupledState& s) const;
    CoupledState unpack(const Vec& x) const;

    const PlateModel& model() const { return *model_; }
    const SimSetup& setup() const { return su_; }
    RunMode mode() const { return mode_; }
    const std::vector<double>& lambda() const { return lambda_; }
    const std::vector<double>& desired_edge() const { return wd_; }

    AuditRecord audit(const CoupledState& s, double t, const Vec2& u) const;

    /// test hook: constant offset added to the observer correction terms
    void set_correction_offset(const Vec2& off) { k_offset_ = off; }

private:
    SimSetup su_;
    RunMode mode_;
    std::unique_ptr<PlateModel> model_;
    std::vector<double> lambda_, wd_, dirac_;
    int im_ = 0;               // measurement node
    int probe_i_ = 0, probe_j_ = 0;

    // active-DOF map (kinematic pins removed)
    std::vector<int> act_nodes_;          // node flat index per active slot
    std::vector<int> node_slot_;          // -1 if pinned
    int na_ = 0, dim_ = 0;

    // assembled blocks (plant-sized state is [w_act; p_act])
    SpMat A_pp_, A_oo_;
    SpMat B_pc_;               // plant rows <- controller state
    SpMat C_cp_, C_co_;        // controller rows <- distributed states
    SpMat C_op_;               // observer rows <- plant state (corrections)
    Eigen::Matrix4d A_cc_;
    Vec b_p_;
    SpMat load_cols_;          // plant p-rows per unit voltage (2 columns)
    SpMat A_full_;
    Vec b_full_;
    Vec2 k_offset_{0.0, 0.0};

    struct Stepper;
    std::shared_ptr<Stepper> stepper_;

    void build_dof_map();
    void assemble();
    void verify_assembly() const;
    Vec pack_plant(const PlantState& s) const;
    void unpack_plant(const Vec& x, PlantState& s) const;
    Vec pack_obs(const ObserverState& s) const;
    void unpack_obs(const Vec& x, ObserverState& s) const;

    RunResult integrate(const CoupledState& x0, const std::function<Vec2(double)>* voltage);
};

} // namespace phplate
