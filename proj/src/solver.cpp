#include <hankel/solver.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace hankel
{

void SolverConfig::validate() const
{
    if (!(rho > 0.0) || !std::isfinite(rho))
    {
        throw ArgumentError("solver: rho must be positive");
    }
    if (max_iters < 1)
    {
        throw ArgumentError("solver: max_iters must be >= 1");
    }
    if (!(tol_primal > 0.0) || !(tol_dual > 0.0))
    {
        throw ArgumentError("solver: tolerances must be positive");
    }
    if (!(delta >= 0.0) || !std::isfinite(delta))
    {
        throw ArgumentError("solver: delta must be finite and >= 0");
    }
}

ComplexMatrix svt(const ComplexMatrix& x, double tau)
{
    if (!(tau >= 0.0))
    {
        throw ArgumentError("svt: tau must be >= 0");
    }
    if (x.size() == 0 || tau == 0.0)
    {
        return x;
    }
    Eigen::BDCSVD<ComplexMatrix> svd(x, Eigen::ComputeThinU |
                                            Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
    {
        throw NumericalError("svt: SVD failed");
    }
    const RealVector& s = svd.singularValues();
    Index keep          = 0;
    while (keep < s.size() && s[keep] > tau)
    {
        ++keep;
    }
    if (keep == 0)
    {
        return ComplexMatrix::Zero(x.rows(), x.cols());
    }
    const RealVector shrunk = s.head(keep).array() - tau;
    return svd.matrixU().leftCols(keep) * shrunk.asDiagonal() *
           svd.matrixV().leftCols(keep).adjoint();
}

RecoveryResult solve(const MeasurementEnsemble& ens, const Observation& obs,
                     const HankelLift& lift, const SolverConfig& cfg)
{
    cfg.validate();
    if (lift.n() != ens.n())
    {
        throw ArgumentError("solve: lift order N=" + std::to_string(lift.n()) +
                            " does not match ensemble N=" +
                            std::to_string(ens.n()));
    }
    if (obs.b.size() != ens.m())
    {
        throw ArgumentError("solve: observation has " +
                            std::to_string(obs.b.size()) +
                            " entries, ensemble expects " +
                            std::to_string(ens.m()));
    }

    const bool equality = cfg.delta == 0.0;
    auto project = [&](const ComplexVector& v) {
        return equality ? ens.project_affine(v, obs.b)
                        : ens.project_ball(v, obs.b, cfg.delta);
    };
    auto finish = [&](RecoveryResult& res, const ComplexVector& y) {
        res.y_hat     = y;
        res.x_hat     = lift.weight_apply(y, true);
        res.objective = nuclear_norm(lift.lift(y));
    };

    RecoveryResult res;
    const ComplexVector start =
        project(ComplexVector::Zero(ens.ambient_len()));

    if (equality && ens.injective())
    {
        finish(res, start);
        res.converged = true;
        return res;
    }

    const double tau = 1.0 / cfg.rho;
    ComplexVector y  = start;
    ComplexMatrix gy = lift.lift(y);
    ComplexMatrix z  = gy;
    ComplexMatrix u  = ComplexMatrix::Zero(lift.n(), lift.n());

    for (int it = 1; it <= cfg.max_iters; ++it)
    {
        const ComplexMatrix z_prev = z;
        z = svt(gy + u, tau);
        y  = project(lift.lift_adjoint(z - u));
        gy = lift.lift(y);
        u += gy - z;

        res.iterations      = it;
        res.primal_residual = (gy - z).norm();
        res.dual_residual   = cfg.rho * lift.lift_adjoint(z - z_prev).norm();

        if (res.primal_residual <= cfg.tol_primal * (1.0 + z.norm()) &&
            res.dual_residual <= cfg.tol_dual * (1.0 + y.norm()))
        {
            res.converged = true;
            break;
        }
    }
    finish(res, y);
    return res;
}

double relative_error(const ComplexVector& x_hat, const ComplexVector& truth)
{
    if (x_hat.size() != truth.size())
    {
        throw ArgumentError("relative_error: length mismatch");
    }
    const double scale = truth.norm();
    if (scale == 0.0)
    {
        throw ArgumentError("relative_error: reference signal is zero");
    }
    return (x_hat - truth).norm() / scale;
}

bool success(const RecoveryResult& result, const ComplexVector& truth,
             double threshold)
{
    return relative_error(result.x_hat, truth) <= threshold;
}

} // namespace hankel
