#include "nekhoro/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace nekhoro {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_unit(double x) {
    const double w = x - std::floor(x);
    return w < 1.0 ? w : 0.0;  // floor can round 1.0 - eps cases
}

}  // namespace

std::pair<Vec, Vec> vector_field(const SystemSpec& spec, const State& state) {
    const int n = spec.dim();
    Vec dtheta = spec.h.frequency(state.I);
    Vec dI(n, 0.0);
    if (spec.epsilon != 0.0 && !spec.f.modes.empty()) {
        const Vec fI = spec.f.d_dI(state.theta, state.I);
        const Vec ftheta = spec.f.d_dtheta(state.theta, state.I);
        for (int i = 0; i < n; ++i) {
            dtheta[i] += spec.epsilon * fI[i];
            dI[i] = -spec.epsilon * ftheta[i];
        }
    }
    return {std::move(dtheta), std::move(dI)};
}

namespace {

// Field and its Jacobian at (theta, I), for the Newton fallback.
void field_jacobian(const SystemSpec& spec, const Vec& theta, const Vec& I, Mat& J) {
    const int n = spec.dim();
    // Layout: rows/cols 0..n-1 = theta block, n..2n-1 = I block.
    for (double& v : J.a) v = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J.at(i, n + j) = spec.h.Q.at(i, j);

    if (spec.epsilon == 0.0) return;
    for (const Mode& m : spec.f.modes) {
        double arg = m.phase;
        for (int j = 0; j < n; ++j) arg += kTwoPi * static_cast<double>(m.k[j]) * theta[j];
        const double c = std::cos(arg), s = std::sin(arg);
        const double cv = m.coeff.value(I);
        const Vec cg = m.coeff.gradient(I);
        for (int a = 0; a < n; ++a) {
            const double ka = static_cast<double>(m.k[a]);
            for (int b = 0; b < n; ++b) {
                const double kb = static_cast<double>(m.k[b]);
                // d(dtheta_a)/dtheta_b = eps * d2f/dI_a dtheta_b
                J.at(a, b) += spec.epsilon * (-cg[a] * s * kTwoPi * kb);
                // d(dtheta_a)/dI_b = eps * d2f/dI_a dI_b
                const double c2ab = m.coeff.c2.rows > 0 ? 2.0 * m.coeff.c2.at(a, b) : 0.0;
                J.at(a, n + b) += spec.epsilon * c2ab * c;
                // d(dI_a)/dtheta_b = -eps * d2f/dtheta_a dtheta_b
                J.at(n + a, b) += spec.epsilon * cv * c * kTwoPi * ka * kTwoPi * kb;
                // d(dI_a)/dI_b = -eps * d2f/dtheta_a dI_b
                J.at(n + a, n + b) += spec.epsilon * cg[b] * s * kTwoPi * ka;
            }
        }
    }
}

}  // namespace

State step_midpoint(const SystemSpec& spec, const State& state, const IntegratorConfig& config) {
    if (!(config.step != 0.0)) throw std::invalid_argument("step_midpoint: zero step");
    const int n = spec.dim();
    const double h = config.step;

    // Solve y = z + h F((z + y)/2).  Euler predictor, then fixed-point.
    Vec th = state.theta, ac = state.I;
    {
        const auto [dth, dI] = vector_field(spec, state);
        for (int i = 0; i < n; ++i) {
            th[i] += h * dth[i];
            ac[i] += h * dI[i];
        }
    }

    Vec mid_th(n), mid_I(n);
    double residual = std::numeric_limits<double>::infinity();
    auto eval_residual = [&](const Vec& yth, const Vec& yI, Vec& rth, Vec& rI) {
        for (int i = 0; i < n; ++i) {
            mid_th[i] = 0.5 * (state.theta[i] + yth[i]);
            mid_I[i] = 0.5 * (state.I[i] + yI[i]);
        }
        const auto [dth, dI] = vector_field(spec, State{mid_th, mid_I, state.t});
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            rth[i] = yth[i] - state.theta[i] - h * dth[i];
            rI[i] = yI[i] - state.I[i] - h * dI[i];
            r = std::max(r, std::max(std::fabs(rth[i]), std::fabs(rI[i])));
        }
        return r;
    };

    Vec rth(n), rI(n);
    residual = eval_residual(th, ac, rth, rI);
    const double target = std::min(config.newton_tol * 1e-3, 1e-15);

    // Fixed-point phase: contraction factor ~ h * Lip(F), so this converges
    // fast at sane step sizes.  Iterate to stagnation for maximal accuracy.
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 60 && residual > target && residual < prev; ++it) {
        prev = residual;
        for (int i = 0; i < n; ++i) {
            th[i] -= rth[i];
            ac[i] -= rI[i];
        }
        residual = eval_residual(th, ac, rth, rI);
    }

    if (residual > config.newton_tol) {
        // Newton fallback on G(y) = y - z - h F((z+y)/2).
        Mat JF(2 * n, 2 * n);
        for (int it = 0; it < config.newton_max_iters && residual > target; ++it) {
            field_jacobian(spec, mid_th, mid_I, JF);
            Mat G(2 * n, 2 * n);
            for (int i = 0; i < 2 * n; ++i) {
                for (int j = 0; j < 2 * n; ++j) G.at(i, j) = -0.5 * h * JF.at(i, j);
                G.at(i, i) += 1.0;
            }
            Vec rhs(2 * n);
            for (int i = 0; i < n; ++i) {
                rhs[i] = rth[i];
                rhs[n + i] = rI[i];
            }
            Vec delta;
            try {
                delta = solve_linear(std::move(G), std::move(rhs));
            } catch (const std::runtime_error&) {
                break;
            }
            for (int i = 0; i < n; ++i) {
                th[i] -= delta[i];
                ac[i] -= delta[n + i];
            }
            const double r = eval_residual(th, ac, rth, rI);
            if (r >= residual && residual <= config.newton_tol) break;
            residual = r;
        }
    }

    if (residual > config.newton_tol)
        throw integration_error("step_midpoint: no convergence (residual " +
                                    std::to_string(residual) + ")",
                                state.t, residual, Trajectory{});

    State out;
    out.theta.resize(n);
    out.I = std::move(ac);
    for (int i = 0; i < n; ++i) out.theta[i] = wrap_unit(th[i]);
    out.t = state.t + h;
    return out;
}

Trajectory integrate(const SystemSpec& spec, const State& initial, double t_max,
                     const IntegratorConfig& config) {
    if (!(config.step > 0)) throw std::invalid_argument("integrate: step must be > 0");
    if (config.sample_stride < 1) throw std::invalid_argument("integrate: stride must be >= 1");

    Trajectory traj;
    State cur = initial;
    for (size_t i = 0; i < cur.theta.size(); ++i) cur.theta[i] = wrap_unit(cur.theta[i]);

    auto record = [&](const State& s) {
        traj.samples.push_back(s);
        traj.energy_log.emplace_back(s.t, spec.energy(s.theta, s.I));
    };
    record(cur);

    if (sup_norm(cur.I) >= spec.R) {
        traj.exit = ExitInfo{cur.t, ExitReason::domain_exit};
        return traj;
    }

    const double h = config.step;
    long step_index = 0;
    while (cur.t < t_max - 0.5 * h) {
        State next;
        try {
            next = step_midpoint(spec, cur, config);
        } catch (integration_error& err) {
            if (traj.samples.back().t != cur.t) record(cur);
            throw integration_error(err.what(), err.time, err.residual, std::move(traj));
        }
        next.t = initial.t + static_cast<double>(++step_index) * h;
        cur = std::move(next);

        const bool exited = sup_norm(cur.I) >= spec.R;
        if (step_index % config.sample_stride == 0 || exited || !(cur.t < t_max - 0.5 * h))
            record(cur);
        if (exited) {
            traj.exit = ExitInfo{cur.t, ExitReason::domain_exit};
            return traj;
        }
    }
    traj.exit = ExitInfo{cur.t, ExitReason::max_time};
    return traj;
}

std::optional<double> escape_time_from(const Trajectory& traj, double rho) {
    if (!(rho > 0)) throw std::invalid_argument("escape_time: rho must be > 0");
    if (traj.samples.empty()) return std::nullopt;
    const Vec& I0 = traj.samples.front().I;
    double prev_d = 0.0;
    double prev_t = traj.samples.front().t;
    for (const State& s : traj.samples) {
        double d = 0.0;
        for (size_t i = 0; i < I0.size(); ++i) d = std::max(d, std::fabs(s.I[i] - I0[i]));
        if (d >= rho) {
            if (s.t == prev_t || d == prev_d) return s.t;
            const double f = (rho - prev_d) / (d - prev_d);
            return prev_t + f * (s.t - prev_t);
        }
        prev_d = d;
        prev_t = s.t;
    }
    return std::nullopt;
}

std::optional<double> escape_time(const SystemSpec& spec, const State& initial, double rho,
                                  double t_max, const IntegratorConfig& config) {
    const Trajectory traj = integrate(spec, initial, t_max, config);
    return escape_time_from(traj, rho);
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out;
    if (traj.samples.empty()) return "t,H\n";
    const int n = static_cast<int>(traj.samples.front().theta.size());
    out += "t";
    for (int i = 1; i <= n; ++i) out += ",theta_" + std::to_string(i);
    for (int i = 1; i <= n; ++i) out += ",I_" + std::to_string(i);
    out += ",H\n";
    char buf[64];
    for (size_t s = 0; s < traj.samples.size(); ++s) {
        const State& st = traj.samples[s];
        std::snprintf(buf, sizeof buf, "%.17g", st.t);
        out += buf;
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", st.theta[i]);
            out += buf;
        }
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", st.I[i]);
            out += buf;
        }
        std::snprintf(buf, sizeof buf, ",%.17g\n", traj.energy_log[s].second);
        out += buf;
    }
    return out;
}

Trajectory trajectory_from_csv(const std::string& text) {
    Trajectory traj;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("trajectory csv: empty");
    int cols = 1;
    for (char c : line) cols += c == ',';
    const int n = (cols - 2) / 2;
    if (cols != 2 * n + 2) throw std::invalid_argument("trajectory csv: bad column count");
    if (line.rfind("t,", 0) != 0) throw std::invalid_argument("trajectory csv: missing header");

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        Vec values;
        while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
        if (static_cast<int>(values.size()) != cols)
            throw std::invalid_argument("trajectory csv: ragged row");
        State st;
        st.t = values[0];
        st.theta.assign(values.begin() + 1, values.begin() + 1 + n);
        st.I.assign(values.begin() + 1 + n, values.begin() + 1 + 2 * n);
        traj.energy_log.emplace_back(st.t, values[2 * n + 1]);
        traj.samples.push_back(std::move(st));
    }
    return traj;
}

}  // namespace nekhoro
