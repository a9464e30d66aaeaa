#include "varlex/calibration.hpp"

#include "varlex/config.hpp"

#include <cstdlib>

namespace varlex {

Calibration Calibration::builtin() {
    return Calibration{};
}

Calibration Calibration::from_file(const std::string& path) {
    Calibration c = builtin();
    const Config cfg = Config::parse_file(path);
    const char* section = "calibration";
    auto pull = [&](const char* key, double& slot) {
        slot = cfg.get_double(section, key, slot);
    };
    pull("product_bound_low", c.product_bound_low);
    pull("product_bound_high", c.product_bound_high);
    pull("formula_ratio_low", c.formula_ratio_low);
    pull("formula_ratio_high", c.formula_ratio_high);
    pull("formula_slope_tol", c.formula_slope_tol);
    pull("doubling_bound", c.doubling_bound);
    pull("embedding_equiv_low", c.embedding_equiv_low);
    pull("embedding_equiv_high", c.embedding_equiv_high);
    pull("disjoint_sum_bound", c.disjoint_sum_bound);
    pull("overlap_sum_bound", c.overlap_sum_bound);
    pull("local_sum_bound", c.local_sum_bound);
    pull("izuki_bound", c.izuki_bound);
    pull("nested_gap_bound", c.nested_gap_bound);
    pull("seminorm_equiv_high", c.seminorm_equiv_high);
    pull("power_average_bound", c.power_average_bound);
    pull("maximal_probe_bound", c.maximal_probe_bound);
    pull("stopping_ctau", c.stopping_ctau);
    pull("default_alpha", c.default_alpha);
    return c;
}

const Calibration& Calibration::active() {
    static const Calibration instance = [] {
        const char* env = std::getenv("VARLEX_DEFAULTS");
        return env && *env ? from_file(env) : builtin();
    }();
    return instance;
}

} // namespace varlex
