#pragma once

#include "gbeam/geometry.hpp"
#include "gbeam/outage_types.hpp"

namespace gbeam::detail {

/// Pmax Ae / (4 pi d)^2
inline double
peak_received_power(const LinkBudget& budget, double pmax)
{
    return pmax * budget.ae() * free_space_gain(budget.distance());
}

inline OutageCase
classify_by_peak(const LinkBudget& budget, double pmax)
{
    const double peak = peak_received_power(budget, pmax);
    if (budget.gamma_th() <= peak * budget.am()) {
        return OutageCase::AlwaysConnected;
    }
    if (budget.gamma_th() > peak) {
        return OutageCase::AlwaysOutage;
    }
    return OutageCase::MainLobeRegime;
}

/// Ae Pt / ((4 pi d)^2 gamma_th); needs a total-power budget.
inline double
power_margin(const LinkBudget& budget)
{
    return budget.total_power() * budget.ae() * free_space_gain(budget.distance()) /
           budget.gamma_th();
}

} // namespace gbeam::detail
