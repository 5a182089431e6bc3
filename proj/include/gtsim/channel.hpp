#pragma once

// Body-surface path loss with log-normal shadowing, and the link budget that
// turns it into CAP delivery decisions. CFP traffic never consults this.

#include <optional>

namespace gtsim {

struct PathLossParams {
    double coeff_d = -27.6;
    double coeff_f = -46.5;
    double offset = 157.0;
    double shadow_sigma_db = 4.12;

    /// Optional single-frequency form PL(d) = a*lg(d) + b + c + shadow.
    struct Generic {
        double a = 0.0;
        double b = 0.0;
        double c = 0.0;
    };
    std::optional<Generic> generic;

    void validate() const;
};

struct LinkBudget {
    double tx_power_dbm = 0.0;
    double sensitivity_dbm = -85.0;

    void validate() const;
};

/// coeff_d*lg(d) + coeff_f*lg(f) + offset + shadow_draw. `d_mm` must lie in
/// [150, 1000] mm and `f` (MHz by default convention) must be positive.
double path_loss_db(double d_mm, double f, const PathLossParams& params, double shadow_draw);

/// The generic a*lg(d) + b + c + shadow form; requires params.generic.
double generic_path_loss_db(double d_mm, const PathLossParams& params, double shadow_draw);

/// Received iff tx_power - |PL| >= sensitivity.
bool cap_frame_received(double pl_db, const LinkBudget& budget);

} // namespace gtsim
