#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "nlsw/fem.hpp"
#include "nlsw/problems.hpp"

namespace nlsw {

enum class InitMode { Ritz, Interpolation };

struct SchemeConfig {
    double tau = 0.0;
    double T = 0.0;
    int assembly_degree = 0;    // 0 -> 4r
    int error_degree = 0;       // 0 -> 2r+4
    double solver_tol = 1e-12;
    InitMode init_mode = InitMode::Ritz;

    int step_count() const {
        double ratio = T / tau;
        int n = static_cast<int>(std::llround(ratio));
        if (n < 1 || std::abs(ratio - n) > 1e-12 * std::max(1, n))
            throw std::invalid_argument("SchemeConfig: tau must divide T exactly");
        return n;
    }
};

/// Leap-frog window (U^{n-1}, U^n) at step index n, t = n*tau.
struct SchemeState {
    int n = 0;
    double t = 0.0;
    DofVector U_prev;
    DofVector U_curr;
};

/// The four summands of the discrete energy E^n, evaluated on the state pair.
struct EnergyBreakdown {
    double kinetic = 0.0;
    double gradient = 0.0;
    double quartic = 0.0;
    double potential = 0.0;
    double total = 0.0;
    double imag_residual = 0.0; // largest |Im| of the quadratic forms
};

struct StepReport {
    SolveStats solver;
    double wall_seconds = 0.0;
    double boundary_lift_norm = 0.0;
};

class LeapFrogScheme {
public:
    LeapFrogScheme(const ProblemSpec& problem, const FeSpace& space, SchemeConfig config)
        : problem_(&problem), space_(&space), cfg_(config) {
        const int r = space.degree;
        if (cfg_.assembly_degree == 0) cfg_.assembly_degree = 4 * r;
        if (cfg_.error_degree == 0) cfg_.error_degree = 2 * r + 4;
        assembly_rule_ = rule_for_degree(cfg_.assembly_degree);
        error_rule_ = rule_for_degree(cfg_.error_degree);
        mass_ = assemble_mass(space, assembly_rule_);
        stiffness_ = assemble_stiffness(space, rule_for_degree(std::max(1, 2 * (r - 1))));
        potential_mass_ = assemble_weighted_mass(
            space,
            [this](int, int, double x, double y) { return problem_->w.value(x, y).real(); },
            assembly_rule_);
        const int nfree = static_cast<int>(space.free_dofs.size());
        mass_ff_ = csr_submatrix(mass_, space.free_dofs, space.free_index, nfree);
        stiffness_ff_ = csr_submatrix(stiffness_, space.free_dofs, space.free_index, nfree);
    }

    const SchemeConfig& config() const { return cfg_; }
    const FeSpace& space() const { return *space_; }
    const ProblemSpec& problem() const { return *problem_; }
    const SparseMatrixReal& mass() const { return mass_; }
    const SparseMatrixReal& stiffness() const { return stiffness_; }
    const SparseMatrixReal& potential_mass() const { return potential_mass_; }
    const TriangleQuadrature& assembly_rule() const { return assembly_rule_; }
    const TriangleQuadrature& error_rule() const { return error_rule_; }

    /// U^0 = R_h u0 (or its interpolant), U^1 from the second-order Taylor
    /// field; boundary dofs of U^1 take the prescribed values at t = tau.
    SchemeState initialize() const {
        const double tau = cfg_.tau;
        const cplx I{0.0, 1.0};
        ScalarField first_step = field_add(
            field_add(problem_->u0, field_scale(tau, problem_->u1)),
            field_scale(0.5 * tau * tau,
                        field_add(field_add(problem_->laplacian_u0,
                                            field_scale(-I, problem_->u1)),
                                  field_add(field_scale(-1.0, field_cubic(problem_->u0)),
                                            field_scale(-1.0, field_mul(problem_->w, problem_->u0))))));
        SchemeState state;
        state.n = 1;
        state.t = tau;
        if (cfg_.init_mode == InitMode::Ritz) {
            state.U_prev = ritz_project_with(*space_, problem_->u0, stiffness_, assembly_rule_,
                                             cfg_.solver_tol);
            state.U_curr = ritz_project_with(*space_, first_step, stiffness_, assembly_rule_,
                                             cfg_.solver_tol);
        } else {
            state.U_prev = interpolate(*space_, problem_->u0);
            state.U_curr = interpolate(*space_, first_step);
        }
        apply_boundary_values(state.U_curr, tau);
        return state;
    }

    /// One leap-frog step with the coefficient field |U^n|^2 + w frozen from
    /// the current state.
    StepReport step(SchemeState& state) const {
        SparseMatrixReal w_n = assemble_weighted_mass(
            *space_, squared_modulus_plus(*space_, state.U_curr, assembly_rule_, &problem_->w),
            assembly_rule_);
        DofVector load;
        if (problem_->source) {
            load = assemble_load(*space_, problem_->source->at(state.t), assembly_rule_);
        }
        return advance_with(state, w_n, problem_->source ? &load : nullptr, +1.0);
    }

    /// Core linear advance with an externally supplied coefficient matrix.
    /// rotation_sign flips the sign of the i*D_tau term (-1 reverses time on
    /// a frozen-coefficient problem).
    StepReport advance_with(SchemeState& state, const SparseMatrixReal& w_n,
                            const DofVector* load, double rotation_sign) const {
        const auto t_start = std::chrono::steady_clock::now();
        const double tau = cfg_.tau;
        const int ndof = space_->dof_count();
        const cplx I{0.0, rotation_sign};
        const cplx alpha = 1.0 / (tau * tau) + I / (2.0 * tau);
        const cplx alpha_conj = 1.0 / (tau * tau) - I / (2.0 * tau);
        const cplx beta{0.5, 0.0};

        // full right-hand side: (2/tau^2) M U^n - [conj-alpha M + 1/2 (K+W)] U^{n-1} + F
        CVector rhs(ndof);
        {
            CVector mu(ndof);
            mass_.multiply(state.U_curr, mu);
            CompositeOperator prev_op{alpha_conj, beta, &mass_, &stiffness_, &w_n};
            CVector prev = apply_operator(prev_op, state.U_prev);
            for (int i = 0; i < ndof; ++i) rhs[i] = (2.0 / (tau * tau)) * mu[i] - prev[i];
            if (load)
                for (int i = 0; i < ndof; ++i) rhs[i] += (*load)[i];
        }

        // Dirichlet lifting at t_{n+1}
        const double t_next = state.t + tau;
        CVector lift(ndof, cplx{});
        double lift_norm = 0.0;
        if (!problem_->homogeneous_boundary) {
            for (int d : space_->boundary_dofs) {
                lift[d] = problem_->boundary.value(space_->dof_coords[d].x,
                                                   space_->dof_coords[d].y, t_next);
                lift_norm += std::norm(lift[d]);
            }
            lift_norm = std::sqrt(lift_norm);
            CompositeOperator full_op{alpha, beta, &mass_, &stiffness_, &w_n};
            CVector coupled = apply_operator(full_op, lift);
            for (int i = 0; i < ndof; ++i) rhs[i] -= coupled[i];
        }

        const int nfree = static_cast<int>(space_->free_dofs.size());
        SparseMatrixReal w_ff = csr_submatrix(w_n, space_->free_dofs, space_->free_index, nfree);
        CompositeOperator op{alpha, beta, &mass_ff_, &stiffness_ff_, &w_ff};

        CVector rhs_f = restrict_free(*space_, rhs);
        // warm start from linear extrapolation of the last two levels
        CVector x0(nfree);
        for (int i = 0; i < nfree; ++i) {
            int d = space_->free_dofs[i];
            x0[i] = 2.0 * state.U_curr[d] - state.U_prev[d];
        }
        auto [x, stats] = solve_bicgstab(op, rhs_f, x0, cfg_.solver_tol, 10 * nfree + 100);

        DofVector u_next = lift;
        scatter_free(*space_, x, u_next);
        state.U_prev = std::move(state.U_curr);
        state.U_curr = std::move(u_next);
        state.n += 1;
        state.t = state.n * tau;

        StepReport report;
        report.solver = stats;
        report.boundary_lift_norm = lift_norm;
        report.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return report;
    }

    /// Discrete energy of the (U^n, U^{n+1}) pair held in the state. Uses the
    /// same matrices and quadrature as the stepper, so the telescoping
    /// cancellation holds at machine precision.
    EnergyBreakdown discrete_energy(const SchemeState& state) const {
        const double tau = cfg_.tau;
        const int ndof = space_->dof_count();
        EnergyBreakdown e;

        auto quad_form = [&](const SparseMatrixReal& m, const CVector& v) {
            CVector mv(ndof);
            m.multiply(v, mv);
            cplx s{};
            for (int i = 0; i < ndof; ++i) s += std::conj(v[i]) * mv[i];
            e.imag_residual = std::max(e.imag_residual, std::abs(s.imag()));
            return s.real();
        };

        CVector diff(ndof);
        for (int i = 0; i < ndof; ++i) diff[i] = (state.U_curr[i] - state.U_prev[i]) / tau;
        e.kinetic = quad_form(mass_, diff);
        e.gradient = 0.5 * (quad_form(stiffness_, state.U_curr) + quad_form(stiffness_, state.U_prev));
        e.potential =
            0.5 * (quad_form(potential_mass_, state.U_curr) + quad_form(potential_mass_, state.U_prev));

        // || U^n U^{n+1} ||^2 / 2 by quadrature (degree 4r integrand, exact)
        double quartic = 0.0;
        detail::BasisTable table(space_->degree, assembly_rule_);
        for (int t = 0; t < space_->mesh->triangle_count(); ++t) {
            detail::CellGeometry geom(*space_->mesh, t);
            const auto& dofs = space_->cell_dofs[t];
            for (size_t q = 0; q < assembly_rule_.points.size(); ++q) {
                cplx a{}, b{};
                for (size_t i = 0; i < dofs.size(); ++i) {
                    a += state.U_prev[dofs[i]] * table.phi[q][i];
                    b += state.U_curr[dofs[i]] * table.phi[q][i];
                }
                quartic += assembly_rule_.points[q].w * geom.jac * std::norm(a) * std::norm(b);
            }
        }
        e.quartic = 0.5 * quartic;
        e.total = e.kinetic + e.gradient + e.quartic + e.potential;
        return e;
    }

    /// L2 error of U^n against the exact solution at the state's time.
    double solution_error(const SchemeState& state) const {
        return l2_error(*space_, state.U_curr, problem_->exact.at(state.t), error_rule_);
    }

    using Observer = std::function<void(const SchemeState&, const StepReport*)>;

    /// initialize + (N-1) steps; the observer (if any) sees the initial state
    /// (null report) and each stepped state.
    SchemeState run(const Observer& observer = {}) const {
        const int n_steps = cfg_.step_count();
        SchemeState state = initialize();
        if (observer) observer(state, nullptr);
        for (int n = 1; n < n_steps; ++n) {
            StepReport report = step(state);
            if (observer) observer(state, &report);
        }
        return state;
    }

private:
    void apply_boundary_values(DofVector& u, double t) const {
        for (int d : space_->boundary_dofs)
            u[d] = problem_->homogeneous_boundary
                       ? cplx{}
                       : problem_->boundary.value(space_->dof_coords[d].x, space_->dof_coords[d].y, t);
    }

    const ProblemSpec* problem_;
    const FeSpace* space_;
    SchemeConfig cfg_;
    TriangleQuadrature assembly_rule_;
    TriangleQuadrature error_rule_;
    SparseMatrixReal mass_;
    SparseMatrixReal stiffness_;
    SparseMatrixReal potential_mass_;
    SparseMatrixReal mass_ff_;
    SparseMatrixReal stiffness_ff_;
};

} // namespace nlsw
