#include "gtsim/channel.hpp"

#include "gtsim/error.hpp"

#include <cmath>
#include <stdexcept>

namespace gtsim {

namespace {
constexpr double kMinDistanceMm = 150.0;
constexpr double kMaxDistanceMm = 1000.0;

void check_distance(double d_mm)
{
    if (!(d_mm > 0.0)) {
        throw std::invalid_argument("distance must be positive");
    }
    if (d_mm < kMinDistanceMm || d_mm > kMaxDistanceMm) {
        throw std::invalid_argument("distance outside the 150..1000 mm model range");
    }
}
} // namespace

void PathLossParams::validate() const
{
    if (!(shadow_sigma_db >= 0.0)) {
        throw ConfigError("shadowing sigma must be >= 0");
    }
}

void LinkBudget::validate() const
{
    if (!(tx_power_dbm > sensitivity_dbm)) {
        throw ConfigError("tx power must exceed receiver sensitivity");
    }
}

double path_loss_db(double d_mm, double f, const PathLossParams& params, double shadow_draw)
{
    check_distance(d_mm);
    if (!(f > 0.0)) {
        throw std::invalid_argument("frequency must be positive");
    }
    return params.coeff_d * std::log10(d_mm) + params.coeff_f * std::log10(f) + params.offset + shadow_draw;
}

double generic_path_loss_db(double d_mm, const PathLossParams& params, double shadow_draw)
{
    if (!params.generic) {
        throw std::invalid_argument("generic path-loss coefficients are not configured");
    }
    check_distance(d_mm);
    const auto& g = *params.generic;
    return g.a * std::log10(d_mm) + g.b + g.c + shadow_draw;
}

bool cap_frame_received(double pl_db, const LinkBudget& budget)
{
    return budget.tx_power_dbm - std::abs(pl_db) >= budget.sensitivity_dbm;
}

} // namespace gtsim
