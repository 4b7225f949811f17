#include "specvs/controller.hpp"

#include "specvs/error.hpp"

namespace specvs {

void ControllerConfig::validate() const {
    if (!(lambda_t > 0.0 && lambda_t < 1.0))
        throw InvalidArgument("bad-gain", "lambda_t must lie in (0, 1)");
    if (!(lambda_r > 0.0 && lambda_r < 1.0))
        throw InvalidArgument("bad-gain", "lambda_r must lie in (0, 1)");
    if (!(eps_g > 0.0)) throw InvalidArgument("bad-tolerance", "eps_g must be > 0");
    if (max_iters <= 0) throw InvalidArgument("bad-config", "max_iters must be positive");
    if (!(resolution > 0.0)) throw InvalidArgument("bad-resolution", "resolution must be > 0");
    if (bandwidth <= 0 || (bandwidth & (bandwidth - 1)) != 0)
        throw InvalidArgument("bad-bandwidth", "bandwidth must be a positive power of two");
    if (l_max < 0 || effective_l_max() > 2 * bandwidth)
        throw InvalidArgument("bad-degree", "l_max must lie in [1, 2B]");
    if (threads < 1) throw InvalidArgument("bad-config", "threads must be >= 1");
}

ControllerState controller_step(const ControllerState& state, const Vec3& t_grad,
                                const Vec3& r_grad, const ControllerConfig& cfg) {
    ControllerState next = state;
    next.h.translation = state.h.translation + cfg.lambda_t * t_grad;

    Vec3 rot_step = cfg.lambda_r * r_grad;
    const double angle = rot_step.norm();
    if (cfg.max_rot_step > 0.0 && angle > cfg.max_rot_step)
        rot_step *= cfg.max_rot_step / angle;
    next.h.rotation = orthonormalized(state.h.rotation * rotation_exp(rot_step));

    next.iteration = state.iteration + 1;
    next.last_t_grad = t_grad;
    next.last_r_grad = r_grad;
    return next;
}

bool converged(const ControllerState& state, double eps_g) {
    return state.last_t_grad.norm() + state.last_r_grad.norm() < eps_g;
}

CameraTwist camera_twist(const ControllerState& state, const ControllerConfig& cfg, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("bad-config", "dt must be > 0");
    CameraTwist tw;
    tw.linear = cfg.lambda_t * state.last_t_grad / dt;
    tw.angular = cfg.lambda_r * state.last_r_grad / dt;
    const double lin = tw.linear.norm();
    if (lin > cfg.max_lin_vel) tw.linear *= cfg.max_lin_vel / lin;
    const double ang = tw.angular.norm();
    if (ang > cfg.max_ang_vel) tw.angular *= cfg.max_ang_vel / ang;
    return tw;
}

}  // namespace specvs
