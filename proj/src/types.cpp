#include "qtraj/types.hpp"

#include <cmath>

#include "qtraj/errors.hpp"
#include "qtraj/log.hpp"

namespace qtraj {

void ModelParams::validate() const {
    if (!std::isfinite(delta) || !std::isfinite(omega))
        throw ConfigError("ModelParams: delta and omega must be finite");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw ConfigError("ModelParams: eta must lie in [0, 1]");
    if (!meas_op.allFinite() || !is_hermitian(meas_op, 1e-12))
        throw ConfigError("ModelParams: measurement operator must be Hermitian (tol 1e-12)");
    if (eta >= 0.1)
        logf(LogLevel::warn,
             "eta = %g is outside the weak-measurement regime this model assumes", eta);
}

}  // namespace qtraj
