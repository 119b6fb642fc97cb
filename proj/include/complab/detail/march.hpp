#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace complab::detail {

// Adaptive Fehlberg 7(8) march from t0 to t1 in either direction.
// `stops` must be monotone in the direction of travel; the march lands exactly
// on each of them. visit(t, x, stop_index) runs after every accepted step, with
// stop_index = -1 when the step did not end on a stop. It may rescale x.
// atol applies to every component; components that start at zero need a real floor.
template <class State, class Rhs, class Cap, class Visit>
void march(Rhs&& rhs, State& x, double t0, double t1, const std::vector<double>& stops,
           double rtol, Cap&& max_step, Visit&& visit, double atol = 1e-280)
{
    namespace odeint = boost::numeric::odeint;
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    auto sys = [&](const State& y, State& dy, double s) {
        rhs(y, dy, t0 + dir * s);
        if (dir < 0)
            for (auto& v : dy) v = -v;
    };
    auto stepper = odeint::make_controlled(atol, rtol, odeint::runge_kutta_fehlberg78<State>());

    std::size_t next = 0;
    while (next < stops.size() && std::abs(stops[next] - t0) <= 0.0) {
        visit(stops[next], x, static_cast<int>(next));
        ++next;
    }
    if (span == 0.0) return;

    double s = 0.0;
    double ds = std::min(span, max_step(t0)) * 0.25;
    int failures = 0;
    while (s < span) {
        double target = next < stops.size() ? std::min(std::abs(stops[next] - t0), span) : span;
        double h = std::min({ds, max_step(t0 + dir * s), target - s});
        bool lands = h >= target - s;
        double s_try = s;
        double h_try = h;
        auto res = stepper.try_step(sys, x, s_try, h_try);
        if (res == odeint::fail) {
            ds = h_try;
            if (++failures > 200 || ds < 1e-15 * std::max(1.0, span))
                throw std::runtime_error("ODE march: step size underflow");
            continue;
        }
        failures = 0;
        s = lands ? target : s_try;
        ds = lands ? std::max(ds, h_try) : h_try;
        if (lands && next < stops.size() && target < span + 1e-300 &&
            std::abs(std::abs(stops[next] - t0) - target) == 0.0) {
            visit(stops[next], x, static_cast<int>(next));
            ++next;
            while (next < stops.size() && std::abs(stops[next] - t0) <= s) {
                visit(stops[next], x, static_cast<int>(next));
                ++next;
            }
        } else {
            visit(lands && s >= span ? t1 : t0 + dir * s, x, -1);
        }
    }
    while (next < stops.size()) {
        visit(stops[next], x, static_cast<int>(next));
        ++next;
    }
}

}  // namespace complab::detail
