#include "clf/fixtures.hpp"

#include <fstream>

#include <fmt/format.h>

#include "clf/errors.hpp"

namespace clf {

Json to_json(const Fixtures& f)
{
    Json j;
    j["fixture_version"] = f.version;
    if (f.has_kernel)
        j["kernel"] = {{"kernel_reference", f.kernel_reference}, {"kernel_floor", f.kernel_floor}};
    if (f.has_blowup)
        j["blowup"] = {{"c_h_reference", f.c_h_reference},
                       {"c_h_floor", f.c_h_floor},
                       {"ln_m_over_n_lo", f.ln_m_over_n_lo},
                       {"ln_m_over_n_hi", f.ln_m_over_n_hi},
                       {"increment_ratio_max", f.increment_ratio_max},
                       {"control_spread_max", f.control_spread_max}};
    if (!f.calibration_config.is_null())
        j["calibration_config"] = f.calibration_config;
    return j;
}

Fixtures load_fixtures(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open fixtures file '{}'", path));
    Fixtures f;
    try {
        const Json j = Json::parse(in);
        f.version = j.at("fixture_version").get<int>();
        if (f.version != current_fixture_version)
            throw ConfigError(fmt::format("{}: fixture_version {} (expected {})", path, f.version,
                                          current_fixture_version));
        if (j.contains("kernel")) {
            const Json& k = j.at("kernel");
            f.has_kernel = true;
            f.kernel_reference = k.at("kernel_reference").get<double>();
            f.kernel_floor = k.at("kernel_floor").get<double>();
        }
        if (j.contains("blowup")) {
            const Json& b = j.at("blowup");
            f.has_blowup = true;
            f.c_h_reference = b.at("c_h_reference").get<double>();
            f.c_h_floor = b.at("c_h_floor").get<double>();
            f.ln_m_over_n_lo = b.at("ln_m_over_n_lo").get<double>();
            f.ln_m_over_n_hi = b.at("ln_m_over_n_hi").get<double>();
            f.increment_ratio_max = b.at("increment_ratio_max").get<double>();
            f.control_spread_max = b.at("control_spread_max").get<double>();
        }
        if (j.contains("calibration_config"))
            f.calibration_config = j.at("calibration_config");
    } catch (const Json::exception& err) {
        throw ConfigError(fmt::format("{}: malformed fixtures ({})", path, err.what()));
    }
    return f;
}

void save_fixtures(const Fixtures& f, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError(fmt::format("cannot write fixtures file '{}'", path));
    out << to_json(f).dump(2) << '\n';
}

} // namespace clf
