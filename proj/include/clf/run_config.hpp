#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clf/counterexample.hpp"
#include "clf/geometry.hpp"
#include "clf/patches.hpp"
#include "clf/quadrature.hpp"
#include "clf/varexp.hpp"

namespace clf {

using Json = nlohmann::ordered_json;

/// Everything a verification command needs. Defaults are the demo
/// configuration: E = (2, 3), p0 = 4, A = 2, N = 8.
struct RunConfig {
    double m1 = 2.0;
    double m2 = 3.0;

    double gamma_safety = 0.9;
    std::optional<GammaConfig> gamma_override;

    ExponentField field;

    QuadratureGrid patch_grid{32, 16, 16, NodeRule::gauss_legendre};
    EvalGrid v_grid{5, 5, 5};
    long kernel_samples = 10000;
    int kernel_refine_steps = 256;

    std::vector<double> alphas{1e-2, 1e-3, 1e-4};
    int n_max = 8;
    double log_budget = default_log_budget;

    std::vector<double> holder_alphas{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    long quasimetric_samples = 10000;

    bool positive_control = false;
    double control_p = 4.0;

    double tol = 1e-10;
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    Ellipsoid ellipsoid() const { return {m1, m2}; }
    /// The override if present, otherwise choose_gammas(ellipsoid, safety).
    GammaConfig gammas() const;
    BlowupConfig blowup() const;

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;
};

/// Unknown keys anywhere are rejected with ConfigError.
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::string& path);
Json to_json(const RunConfig& cfg);

} // namespace clf
