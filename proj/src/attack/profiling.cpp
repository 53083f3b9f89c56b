#include "ooblab/attack/profiling.hpp"

#include "ooblab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ooblab::attack {

namespace {

bool any_effect(std::span<const ActuationObservation> obs) {
    return std::any_of(obs.begin(), obs.end(), [](const auto& o) { return o.magnitude_class > 0; });
}

std::vector<double> change_times(std::span<const ActuationObservation> obs) {
    std::vector<double> out;
    Direction last = Direction::none;
    for (const auto& o : obs) {
        if (o.direction == Direction::none)
            continue;
        if (last != Direction::none && o.direction != last)
            out.push_back(o.time);
        last = o.direction;
    }
    return out;
}

std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

} // namespace

std::optional<double> estimate_epsilon(std::span<const ActuationObservation> observations) {
    const auto t = change_times(observations);
    if (t.size() < 2)
        return std::nullopt;
    const double span = t.back() - t.front();
    if (!(span > 0.0))
        return std::nullopt;
    return static_cast<double>(t.size() - 1) / (2.0 * span);
}

ProfileResult profile_resonance(DeviceOracle& device, const ProfileOptions& o) {
    if (!(o.coarse_step_hz > 0.0) || !(o.fine_step_hz > 0.0) || !(o.window_s > 0.0))
        throw DomainError("profile_resonance: steps and window must be positive");
    if (!(o.sweep_hi_hz > o.sweep_lo_hz) || !(o.sweep_lo_hz > 0.0))
        throw DomainError("profile_resonance: empty sweep range");

    ProfileResult r;
    auto probe = [&](double f) {
        device.settle();
        const auto obs = device.observe(f, o.level, o.window_s);
        const bool hit = any_effect(obs);
        if (hit) {
            const auto e = estimate_epsilon(obs);
            // No alternation over the window on an affected device means a DC-like alias.
            if (!e || *e < 1.0)
                r.candidates.push_back(f);
        }
        return hit;
    };

    double first = -1.0, last = -1.0;
    for (double f = o.sweep_lo_hz + o.start_offset_hz; f <= o.sweep_hi_hz + 1e-9; f += o.coarse_step_hz) {
        if (probe(f)) {
            if (first < 0.0)
                first = f;
            last = f;
        }
    }
    if (first < 0.0)
        return r; // not affected

    r.affected = true;
    r.band_lo_hz = first;
    for (double f = first - o.fine_step_hz; f > first - o.coarse_step_hz + 1e-9 && f > 0.0; f -= o.fine_step_hz) {
        if (!probe(f))
            break;
        r.band_lo_hz = f;
    }
    r.band_hi_hz = last;
    for (double f = last + o.fine_step_hz; f < last + o.coarse_step_hz - 1e-9; f += o.fine_step_hz) {
        if (!probe(f))
            break;
        r.band_hi_hz = f;
    }
    std::sort(r.candidates.begin(), r.candidates.end());
    return r;
}

namespace {

class Synchronizer {
public:
    Synchronizer(AttackerState& s, DeviceOracle& d, const SyncOptions& o)
        : s_(s), dev_(d), o_(o), start_(d.elapsed_s()) {}

    // |eps| observed at f; 0 for a DC-like alias.
    double measure(double f) {
        check_budget();
        std::vector<ActuationObservation> obs;
        double spent = 0.0;
        while (spent < o_.max_window_s) {
            auto more = dev_.observe(f, o_.level, o_.window_s);
            obs.insert(obs.end(), more.begin(), more.end());
            spent += o_.window_s;
            if (static_cast<int>(change_times(obs).size()) >= o_.min_changes)
                break;
            check_budget();
        }
        if (!any_effect(obs))
            throw UnsupportedError("synchronize: no observable effect at the current frequency");
        const auto e = estimate_epsilon(obs);
        const double v = e.value_or(0.0);
        s_.sign_trail.push_back(fmt("F=%.3f |eps|=%.3f", f, v));
        return v;
    }

    void check_budget() const {
        if (dev_.elapsed_s() - start_ > o_.budget_s)
            throw SyncTimeout("synchronize: budget exhausted");
    }

    double round_fine(double f) const { return std::round(f / o_.fine_step_hz) * o_.fine_step_hz; }

    AttackerState& s_;
    DeviceOracle& dev_;
    const SyncOptions& o_;
    double start_;
};

} // namespace

AttackerState synchronize(AttackerState state, DeviceOracle& device, const SyncOptions& o) {
    if (!(o.fine_step_hz > 0.0) || !(o.coarse_step_hz > 0.0) || !(o.window_s > 0.0) || !(o.step_hz > 0.0))
        throw DomainError("synchronize: steps and window must be positive");
    state.phase = AttackPhase::synchronizing;
    Synchronizer sy(state, device, o);

    double f = state.frequency_hz;
    double e = sy.measure(f);
    int sign = 0; // sign of eps at f

    if (e > 0.0) {
        // Gradient-sign rule: |eps| shrinking as F rises means F sits below n0*Fs.
        const double probe = std::max(o.fine_step_hz, std::min(o.coarse_step_hz, sy.round_fine(0.5 * e)));
        const double e_up = sy.measure(f + probe);
        sign = e_up < e ? -1 : 1;
        state.sign_trail.push_back(sign < 0 ? "eps<0: |eps| fell as F rose" : "eps>0: |eps| grew as F rose");
        f += probe;
        e = e_up;
        if (e == 0.0)
            sign = 0;
        double stride = o.coarse_step_hz;
        while (e >= o.target_epsilon_hz) {
            const double next_f = f - sign * stride;
            const double next_e = sy.measure(next_f);
            if (next_e > e) {
                // Stepped over n0*Fs.
                sign = -sign;
                stride = std::max(o.fine_step_hz, 0.5 * stride);
            }
            f = next_f;
            e = next_e;
            if (e == 0.0)
                sign = 0;
        }
        if (sign != 0 && e > 0.0) {
            // Confirm which side of n0*Fs we ended on with a fine probe.
            const double e_up = sy.measure(f + o.fine_step_hz);
            if (e_up == 0.0) {
                f += o.fine_step_hz;
                e = 0.0;
                sign = 0;
            } else {
                sign = e_up < e ? -1 : 1;
            }
        }
    }
    state.n0fs_estimate = f - sign * e;
    state.sign_trail.push_back(fmt("n0Fs~%.3f (F=%.3f)", state.n0fs_estimate, f));

    if (o.policy == PolicyKind::switching || o.policy == PolicyKind::auto_switching) {
        double n0 = state.n0fs_estimate;
        for (;;) {
            const double f1 = sy.round_fine(n0 - 0.5 * o.step_hz);
            const double f2 = f1 + o.step_hz;
            const double e1 = sy.measure(f1);
            const double e2 = sy.measure(f2);
            if (e1 > 0.0 && e2 > 0.0 && std::abs(e1 + e2 - o.step_hz) <= 0.3 * o.step_hz) {
                state.f1_hz = f1;
                state.f2_hz = f2;
                state.frequency_hz = f1;
                state.on_f2 = false;
                state.n0fs_estimate = f1 + e1;
                state.epsilon_sign = -1;
                state.epsilon_abs = e1;
                state.sign_trail.push_back(fmt("bracket F1=%.3f F2=%.3f", f1, f2));
                break;
            }
            if (e1 == 0.0)
                n0 = f1;
            else if (e2 == 0.0)
                n0 = f2;
            else if (e1 < e2)
                n0 = f1 - e1; // both above n0*Fs
            else
                n0 = f2 + e2; // both below
            if (std::abs(sy.round_fine(n0 - 0.5 * o.step_hz) - f1) < 0.5 * o.fine_step_hz)
                n0 += (e1 < e2 ? -1.0 : 1.0) * o.fine_step_hz;
            state.sign_trail.push_back(fmt("bracket rejected, n0Fs~%.3f (%.3f)", n0, e1 + e2));
        }
    } else {
        // Side-Swing needs a slow but nonzero alias.
        const double n0 = state.n0fs_estimate;
        while (e < o.min_epsilon_hz || e >= o.target_epsilon_hz) {
            const double away = f >= n0 ? 1.0 : -1.0;
            f += (e < o.min_epsilon_hz ? away : -away) * o.fine_step_hz;
            e = sy.measure(f);
        }
        state.frequency_hz = f;
        state.f1_hz = f;
        state.f2_hz = f + o.step_hz;
        state.epsilon_sign = f >= state.n0fs_estimate ? 1 : -1;
        state.epsilon_abs = e;
    }
    state.phase = AttackPhase::manipulating;
    return state;
}

} // namespace ooblab::attack
