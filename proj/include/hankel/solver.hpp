#ifndef HANKEL_SOLVER_HPP
#define HANKEL_SOLVER_HPP

#include <hankel/hankel_core.hpp>
#include <hankel/measurement.hpp>
#include <hankel/types.hpp>

namespace hankel
{

struct SolverConfig
{
    double rho       = 1.0;  ///< augmented Lagrangian penalty
    int max_iters    = 2000;
    double tol_primal = 1e-7;
    double tol_dual   = 1e-7;
    double delta     = 0.0;  ///< noise ball radius; 0 selects B y = b

    /// Throws ArgumentError on rho <= 0, non-positive tolerances or
    /// max_iters < 1, negative delta.
    void validate() const;
};

struct RecoveryResult
{
    ComplexVector x_hat; ///< recovered raw signal, D^{-1} y_hat
    ComplexVector y_hat; ///< recovered weighted signal
    int iterations          = 0;
    double primal_residual  = 0.0;
    double dual_residual    = 0.0;
    double objective        = 0.0; ///< ||lift(y_hat)||_*
    bool converged          = false;
};

/// Default relative-error threshold used by success().
inline constexpr double default_success_threshold = 1e-3;

/// Singular value soft-thresholding: U max(S - tau, 0) V^H.
ComplexMatrix svt(const ComplexMatrix& x, double tau);

///
/// ADMM for  min ||lift(y)||_*  s.t.  B y = b  (cfg.delta == 0)
///                             or  ||B y - b|| <= cfg.delta.
///
/// Splitting Z = lift(y) with scaled dual U:
///   Z <- svt(lift(y) + U, 1/rho)
///   y <- feasibility projection of lift_adjoint(Z - U)
///   U <- U + lift(y) - Z
/// The y-step is exact because lift is an isometry. Stops when
/// ||lift(y) - Z||_F <= tol_primal (1 + ||Z||_F) and
/// rho ||lift_adjoint(Z - Z_prev)|| <= tol_dual (1 + ||y||), or at max_iters
/// with converged == false.
///
/// When cfg.delta == 0 and B is injective the feasible set is one point and
/// it is returned directly with zero iterations.
///
RecoveryResult solve(const MeasurementEnsemble& ens, const Observation& obs,
                     const HankelLift& lift, const SolverConfig& cfg);

/// Relative error ||x_hat - truth|| / ||truth||.
double relative_error(const ComplexVector& x_hat, const ComplexVector& truth);

/// relative_error(result.x_hat, truth) <= threshold. Throws on zero truth.
bool success(const RecoveryResult& result, const ComplexVector& truth,
             double threshold = default_success_threshold);

} // namespace hankel

#endif // HANKEL_SOLVER_HPP
