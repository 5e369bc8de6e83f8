#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nekhoro/model.hpp"

namespace nekhoro {

// A phase-space point; angles are kept wrapped to [0, 1).
struct State {
    Vec theta;
    Vec I;
    double t = 0.0;
};

enum class ExitReason { domain_exit, max_time };

struct ExitInfo {
    double time = 0.0;
    ExitReason reason = ExitReason::max_time;
};

struct Trajectory {
    std::vector<State> samples;  // stride-decimated, always includes endpoints
    std::vector<std::pair<double, double>> energy_log;  // (t, H), aligned with samples
    std::optional<ExitInfo> exit;
};

struct IntegratorConfig {
    double step = 1e-2;
    double newton_tol = 1e-13;
    int newton_max_iters = 25;
    int sample_stride = 1;
};

// Implicit-midpoint step failed to converge; carries whatever was integrated.
class integration_error : public std::runtime_error {
public:
    integration_error(const std::string& what, double t, double residual, Trajectory partial)
        : std::runtime_error(what), time(t), residual(residual), partial(std::move(partial)) {}
    double time;
    double residual;
    Trajectory partial;
};

// Canonical vector field of H = h + eps * f:
//   dtheta = grad_I H,  dI = -grad_theta H.
std::pair<Vec, Vec> vector_field(const SystemSpec& spec, const State& state);

// One implicit-midpoint step (fixed-point iteration with a Newton fallback);
// symmetric, symplectic, order 2.  Angles re-wrapped mod 1.
State step_midpoint(const SystemSpec& spec, const State& state, const IntegratorConfig& config);

// Repeated midpoint steps until t_max or |I|_inf >= R (domain exit).
Trajectory integrate(const SystemSpec& spec, const State& initial, double t_max,
                     const IntegratorConfig& config);

// First time |I(t) - I0|_inf reaches rho, interpolated linearly between
// recorded samples; nullopt if the drift never gets there before t_max.
std::optional<double> escape_time(const SystemSpec& spec, const State& initial, double rho,
                                  double t_max, const IntegratorConfig& config);
std::optional<double> escape_time_from(const Trajectory& traj, double rho);

// Trajectory CSV: header "t,theta_1..,I_1..,H", 17 significant digits.
std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text);

}  // namespace nekhoro
