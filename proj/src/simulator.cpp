#include "cforge/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>

namespace cforge::sim {

namespace {

using circuit::BranchQuantities;
using circuit::Configuration;

void rk4(const Configuration& cfg, Vec4& x, double h) {
    const auto& ops = kernels::active_ops();
    Vec4 k1, k2, k3, k4, tmp;
    ops.affine4(cfg.a, x.data(), cfg.b.data(), k1.data());
    ops.axpy4(x.data(), 0.5 * h, k1.data(), tmp.data());
    ops.affine4(cfg.a, tmp.data(), cfg.b.data(), k2.data());
    ops.axpy4(x.data(), 0.5 * h, k2.data(), tmp.data());
    ops.affine4(cfg.a, tmp.data(), cfg.b.data(), k3.data());
    ops.axpy4(x.data(), h, k3.data(), tmp.data());
    ops.affine4(cfg.a, tmp.data(), cfg.b.data(), k4.data());
    ops.rk4_combine(x.data(), k1.data(), k2.data(), k3.data(), k4.data(), h, x.data());
}

/// Snap the state onto the zero-diode-current manifold when commutating
/// into the idle configuration.
void project_idle(const SwitchedCircuit& c, Vec4& x) {
    if (c.topology == Topology::InvertingBuckBoost) {
        x[0] = 0.0;
    } else {
        const double loop = 0.5 * (x[0] - x[1]);
        x[0] = loop;
        x[1] = -loop;
    }
}

bool finite_state(const SwitchedCircuit& c, const Vec4& x) {
    for (int i = 0; i < c.n_states; ++i)
        if (!std::isfinite(x[i])) return false;
    return true;
}

struct Recorder {
    const SwitchedCircuit* c = nullptr;
    WaveformSet* w = nullptr;
    std::vector<int> slots;  // index into the per-sample value array, -1 = skipped

    static std::vector<std::pair<std::string, std::string>> available(
        const SwitchedCircuit& c) {
        std::vector<std::pair<std::string, std::string>> v;
        for (int i = 0; i < c.n_states; ++i) {
            const std::string& label = c.state_labels[i];
            v.emplace_back(label, label[0] == 'i' ? "A" : "V");
        }
        v.emplace_back("v_out", "V");
        v.emplace_back("i_out", "A");
        v.emplace_back("i_sw", "A");
        v.emplace_back("i_D", "A");
        v.emplace_back("i_C_out", "A");
        v.emplace_back("v_sw", "V");
        v.emplace_back("p_sw", "W");
        if (c.topology == Topology::Sepic) {
            v.emplace_back("v_L1", "V");
            v.emplace_back("v_L2", "V");
            v.emplace_back("i_C1", "A");
        } else {
            v.emplace_back("v_L", "V");
        }
        v.emplace_back("i_src", "A");
        return v;
    }

    Recorder(const SwitchedCircuit& circ, WaveformSet& out,
             const std::vector<std::string>& wanted)
        : c(&circ), w(&out) {
        const auto avail = available(circ);
        for (const auto& name : wanted) {
            bool known = false;
            for (const auto& [n, u] : avail) known = known || n == name;
            if (!known)
                throw ValidationError({"record: unknown signal name '" + name + "'"});
        }
        int slot = 0;
        for (const auto& [n, u] : avail) {
            if (!wanted.empty() &&
                std::find(wanted.begin(), wanted.end(), n) == wanted.end()) {
                slots.push_back(-1);
                continue;
            }
            w->signals.push_back({n, u, {}});
            slots.push_back(slot++);
        }
    }

    void sample(const Vec4& x, circuit::ConfigId id) {
        const BranchQuantities q = circuit::branch_currents(*c, x, id);
        std::size_t k = 0;
        auto emit = [&](double v) {
            if (slots[k] >= 0) w->signals[slots[k]].samples.push_back(v);
            ++k;
        };
        for (int i = 0; i < c->n_states; ++i) emit(x[i]);
        emit(q.v_out);
        emit(q.i_out);
        emit(q.i_sw);
        emit(q.i_d);
        emit(q.i_c_out);
        emit(q.v_sw);
        emit(q.p_sw);
        emit(q.v_l1);
        if (c->topology == Topology::Sepic) {
            emit(q.v_l2);
            emit(q.i_c1);
        }
        emit(q.i_src);
    }
};

struct PeriodOutcome {
    bool idle_entered = false;
};

/// Integrates exactly one period. When rec is non-null, samples are taken at
/// every step start; the caller appends the closing endpoint.
PeriodOutcome run_period(const SwitchedCircuit& c, Vec4& x, int n_steps, int on_steps,
                         double dt, Recorder* rec) {
    PeriodOutcome out;
    for (int k = 0; k < n_steps; ++k) {
        const bool gate = k < on_steps;
        ConfigId id = circuit::configuration_transition(c, x, gate);
        if (rec) rec->sample(x, id);
        id = step(c, x, id, dt);
        if (id == ConfigId::GateOffIdle) out.idle_entered = true;
    }
    return out;
}

int snapped_on_steps(double duty, int n_steps) {
    const int on = static_cast<int>(std::lround(duty * n_steps));
    return std::clamp(on, 1, n_steps - 1);
}

/// Solves the n x n system a*x = rhs in place (partial pivoting). Returns
/// false when a pivot collapses.
bool solve_linear(double a[4][4], double* rhs, int n) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-14) return false;
        if (pivot != col) {
            for (int k = 0; k < n; ++k) std::swap(a[col][k], a[pivot][k]);
            std::swap(rhs[col], rhs[pivot]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int k = col; k < n; ++k) a[r][k] -= f * a[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        for (int k = r + 1; k < n; ++k) rhs[r] -= a[r][k] * rhs[k];
        rhs[r] /= a[r][r];
    }
    return true;
}

double boundary_diff(const Vec4& a, const Vec4& b, int n) {
    double d = 0.0;
    for (int i = 0; i < n; ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

/// Cycle-map fixed-point extrapolation. The ideal SEPIC carries an internal
/// loop mode whose cycle-map eigenvalue sits at ~1 - 3e-8, so plain
/// iteration needs ~1e7 cycles; the map itself is affine wherever the
/// configuration sequence is fixed, so its fixed point can be solved for
/// directly from finite-difference probes (exact for an affine map). The
/// candidate is accepted only when a verification cycle shrinks the
/// residual, which guards against probes that straddle a CCM/DCM boundary.
bool try_fixed_point_jump(const SwitchedCircuit& c, Vec4& x, int n_steps, int on_steps,
                          double dt) {
    const int n = c.n_states;
    auto cycle = [&](Vec4 state) {
        run_period(c, state, n_steps, on_steps, dt, nullptr);
        return state;
    };

    Vec4 z = x;
    Vec4 fz = cycle(z);
    double rz = boundary_diff(fz, z, n);
    const double r0 = rz;
    if (r0 == 0.0) return false;

    // The map is piecewise-affine, so each Newton step is exact within a
    // configuration-sequence region; a handful of iterations also cover
    // trajectories that hop regions (orbits grazing the conduction boundary).
    bool improved = false;
    for (int iter = 0; iter < 8 && rz > 0.0; ++iter) {
        double scale = 1.0;
        for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(z[i]));
        const double h = 1e-4 * scale;

        // rows of (I - M) via probes of the cycle map M
        double a[4][4] = {};
        for (int j = 0; j < n; ++j) {
            Vec4 probe = z;
            probe[j] += h;
            const Vec4 yj = cycle(probe);
            for (int i = 0; i < n; ++i) {
                const double m_ij = (yj[i] - fz[i]) / h;
                a[i][j] = (i == j ? 1.0 : 0.0) - m_ij;
            }
        }
        double rhs[4];
        for (int i = 0; i < n; ++i) rhs[i] = fz[i] - z[i];
        if (!solve_linear(a, rhs, n)) break;

        Vec4 cand = z;
        for (int i = 0; i < n; ++i) cand[i] += rhs[i];
        if (!finite_state(c, cand)) break;
        const Vec4 fcand = cycle(cand);
        if (!finite_state(c, fcand)) break;
        const double rc = boundary_diff(fcand, cand, n);
        if (rc >= rz) break;  // no progress: outside this region's basin
        z = cand;
        fz = fcand;
        rz = rc;
        improved = true;
        if (rz < 1e-14 * scale) break;
    }

    if (!improved || rz >= 0.5 * r0) return false;
    x = z;
    return true;
}

}  // namespace

SimDivergence::SimDivergence(double t, const std::string& what)
    : std::runtime_error(what), t_(t) {}

void validate_sim_config(const SimConfig& cfg) {
    std::vector<std::string> bad;
    if (cfg.steps_per_period < 100) bad.push_back("steps_per_period: must be >= 100");
    if (cfg.max_cycles < 1) bad.push_back("max_cycles: must be >= 1");
    if (!(cfg.steady_state_tol > 0)) bad.push_back("steady_state_tol: must be > 0");
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

const Signal& WaveformSet::signal(const std::string& name) const {
    for (const auto& s : signals)
        if (s.name == name) return s;
    throw std::out_of_range("no signal named " + name);
}

bool WaveformSet::has_signal(const std::string& name) const {
    for (const auto& s : signals)
        if (s.name == name) return true;
    return false;
}

bool duty_schedule(double duty, double period, double t) {
    const double phase = t - period * std::floor(t / period);
    return phase < duty * period;
}

ConfigId step(const SwitchedCircuit& c, Vec4& x, ConfigId active, double dt) {
    const Configuration& cfg = c.config(active);
    if (active != ConfigId::GateOffDiodeOn) {
        rk4(cfg, x, dt);
        return active;
    }

    Vec4 trial = x;
    rk4(cfg, trial, dt);
    if (c.diode_current_if_conducting(trial) >= 0.0) {
        x = trial;
        return active;
    }

    // Diode current crosses zero inside this step: bisect the crossing time
    // to within dt/1024, commutate, and idle out the remainder.
    double lo = 0.0, hi = dt;
    while (hi - lo > dt / 1024.0) {
        const double mid = 0.5 * (lo + hi);
        Vec4 probe = x;
        rk4(cfg, probe, mid);
        (c.diode_current_if_conducting(probe) > 0.0 ? lo : hi) = mid;
    }
    const double tau = 0.5 * (lo + hi);
    rk4(cfg, x, tau);
    project_idle(c, x);
    rk4(c.config(ConfigId::GateOffIdle), x, dt - tau);
    return ConfigId::GateOffIdle;
}

namespace {

SimResult run_impl(const SwitchedCircuit& c, const SimConfig& cfg, bool to_steady_state,
                   int cycle_limit) {
    validate_sim_config(cfg);
    const int n = cfg.steps_per_period;
    const double dt = c.period / n;
    const int on_steps = snapped_on_steps(c.duty, n);
    const int cycles = to_steady_state ? cfg.max_cycles : cycle_limit;

    SimResult res;
    res.waveforms.dt = dt;
    Vec4 x{};

    std::optional<Recorder> transient_rec;
    Recorder* rec = nullptr;
    if (!to_steady_state) rec = &transient_rec.emplace(c, res.waveforms, cfg.record);

    bool idle_in_last = false;
    int next_jump = 32;
    for (int cycle = 0; cycle < cycles; ++cycle) {
        if (rec) res.waveforms.cycle_boundaries.push_back(res.waveforms.n_samples());
        const Vec4 x_prev = x;
        const PeriodOutcome po = run_period(c, x, n, on_steps, dt, rec);
        idle_in_last = po.idle_entered;
        res.cycles_run = cycle + 1;

        if (!finite_state(c, x))
            throw SimDivergence(res.cycles_run * c.period,
                                "simulation diverged (non-finite state) at t = " +
                                    std::to_string(res.cycles_run * c.period) + " s");

        if (to_steady_state) {
            double scale = 0.0, diff = 0.0;
            for (int i = 0; i < c.n_states; ++i) {
                scale = std::max(scale, std::abs(x[i]));
                diff = std::max(diff, std::abs(x[i] - x_prev[i]));
            }
            if (diff <= cfg.steady_state_tol * std::max(scale, 1e-12)) {
                res.converged = true;
                break;
            }
            // Slow contraction (near-unit cycle-map eigenvalues): periodically
            // attempt a direct jump to the cycle-map fixed point.
            if (res.cycles_run == next_jump) {
                try_fixed_point_jump(c, x, n, on_steps, dt);
                next_jump += 32;
            }
        }
    }

    if (to_steady_state) {
        // Record the converged (or last attempted) cycle.
        Recorder final_rec(c, res.waveforms, cfg.record);
        res.waveforms.cycle_boundaries.push_back(0);
        const PeriodOutcome po = run_period(c, x, n, on_steps, dt, &final_rec);
        idle_in_last = po.idle_entered;
        const ConfigId closing = circuit::configuration_transition(c, x, true);
        final_rec.sample(x, closing);
    } else if (rec) {
        const ConfigId closing = circuit::configuration_transition(c, x, true);
        rec->sample(x, closing);
    }

    res.final_state = x;
    res.conduction_mode = idle_in_last ? ConductionMode::DCM : ConductionMode::CCM;
    return res;
}

}  // namespace

SimResult run_to_steady_state(const SwitchedCircuit& c, const SimConfig& cfg) {
    return run_impl(c, cfg, true, 0);
}

SimResult run_transient(const SwitchedCircuit& c, const SimConfig& cfg, int cycle_limit) {
    if (cycle_limit < 1) throw ValidationError({"cycles: must be >= 1"});
    return run_impl(c, cfg, false, cycle_limit);
}

void write_csv(std::ostream& os, const WaveformSet& w) {
    os << "t (s)";
    for (const auto& s : w.signals) os << ',' << s.name << " (" << s.unit << ')';
    os << '\n';
    char buf[40];
    const std::size_t n = w.n_samples();
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(i) * w.dt);
        os << buf;
        for (const auto& s : w.signals) {
            std::snprintf(buf, sizeof buf, "%.17g", s.samples[i]);
            os << ',' << buf;
        }
        os << '\n';
    }
}

}  // namespace cforge::sim
