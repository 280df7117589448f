#include "clf/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <string_view>
#include <type_traits>

#include <fmt/format.h>

#include "clf/errors.hpp"

namespace clf {

namespace {

/// Walks one JSON object, rejecting keys outside `allowed`.
class Section {
public:
    Section(const Json& j, std::string path, std::initializer_list<std::string_view> allowed)
        : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ConfigError(fmt::format("{}: expected an object", where()));
        for (const auto& item : j_.items()) {
            if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
                throw ConfigError(fmt::format("{}: unknown key '{}'", where(), item.key()));
        }
    }

    bool has(const char* key) const { return j_.contains(key); }

    Section child(const char* key, std::initializer_list<std::string_view> allowed) const
    {
        return Section(j_.at(key), join(key), allowed);
    }

    void number(const char* key, double& out) const
    {
        if (!has(key))
            return;
        const Json& v = j_.at(key);
        if (!v.is_number())
            throw ConfigError(fmt::format("{}: expected a number", join(key)));
        out = v.get<double>();
    }

    template <class Int>
    void integer(const char* key, Int& out) const
    {
        if (!has(key))
            return;
        const Json& v = j_.at(key);
        if (!v.is_number_integer())
            throw ConfigError(fmt::format("{}: expected an integer", join(key)));
        if constexpr (std::is_unsigned_v<Int>) {
            if (v.is_number_unsigned())
                out = v.get<Int>();
            else if (v.get<long long>() >= 0)
                out = Int(v.get<long long>());
            else
                throw ConfigError(fmt::format("{}: must be non-negative", join(key)));
        } else {
            out = v.get<Int>();
        }
    }

    void boolean(const char* key, bool& out) const
    {
        if (!has(key))
            return;
        if (!j_.at(key).is_boolean())
            throw ConfigError(fmt::format("{}: expected true or false", join(key)));
        out = j_.at(key).get<bool>();
    }

    void string(const char* key, std::string& out) const
    {
        if (!has(key))
            return;
        if (!j_.at(key).is_string())
            throw ConfigError(fmt::format("{}: expected a string", join(key)));
        out = j_.at(key).get<std::string>();
    }

    void numbers(const char* key, std::vector<double>& out) const
    {
        if (!has(key))
            return;
        const Json& v = j_.at(key);
        if (!v.is_array())
            throw ConfigError(fmt::format("{}: expected an array of numbers", join(key)));
        out.clear();
        for (const auto& x : v) {
            if (!x.is_number())
                throw ConfigError(fmt::format("{}: expected an array of numbers", join(key)));
            out.push_back(x.get<double>());
        }
    }

    std::string join(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    std::string where() const { return path_.empty() ? "config" : path_; }

    const Json& j_;
    std::string path_;
};

NodeRule parse_rule(const std::string& s, const std::string& path)
{
    if (s == "gauss_legendre")
        return NodeRule::gauss_legendre;
    if (s == "midpoint")
        return NodeRule::midpoint;
    throw ConfigError(fmt::format("{}: unknown rule '{}' (gauss_legendre or midpoint)", path, s));
}

std::string_view rule_name(NodeRule r)
{
    return r == NodeRule::gauss_legendre ? "gauss_legendre" : "midpoint";
}

/// Runs a module-level validator and reports its message under `path`.
template <class F>
void check(const char* path, F&& f)
{
    try {
        f();
    } catch (const DomainError& err) {
        throw ConfigError(fmt::format("{}: {}", path, err.what()));
    }
}

} // namespace

GammaConfig RunConfig::gammas() const
{
    if (gamma_override)
        return *gamma_override;
    return choose_gammas(ellipsoid(), gamma_safety);
}

BlowupConfig RunConfig::blowup() const
{
    BlowupConfig b;
    b.ellipsoid = ellipsoid();
    b.gammas = gammas();
    b.field = field;
    b.n_max = n_max;
    b.patch_grid = patch_grid;
    b.v_grid = v_grid;
    b.tol = tol;
    b.log_budget = log_budget;
    return b;
}

void RunConfig::validate() const
{
    check("ellipsoid", [&] { (void)ellipsoid(); });
    check("gammas", [&] {
        if (gamma_override)
            gamma_override->validate_structure();
        else
            (void)choose_gammas(ellipsoid(), gamma_safety);
    });
    check("exponent", [&] { field.validate(); });
    check("grids.patch", [&] { patch_grid.validate(); });
    check("grids.v_eval", [&] { v_grid.validate(); });
    if (kernel_samples < 1)
        throw ConfigError("kernel.samples: must be >= 1");
    if (kernel_refine_steps < 0)
        throw ConfigError("kernel.refine_steps: must be >= 0");
    if (alphas.empty())
        throw ConfigError("alphas: must not be empty");
    const GammaConfig g = gammas();
    for (double a : alphas) {
        check("alphas", [&] {
            (void)make_patch(PatchKind::source, a, g);
            (void)make_patch(PatchKind::target, a, g);
        });
    }
    if (n_max < 1)
        throw ConfigError(fmt::format("schedule.n_max: must be >= 1 (got {})", n_max));
    if (!(log_budget > 0))
        throw ConfigError("schedule.log_budget: must be positive");
    if (holder_alphas.empty())
        throw ConfigError("log_holder.alphas: must not be empty");
    for (double a : holder_alphas)
        if (!(a > 0 && a < 0.5))
            throw ConfigError(fmt::format("log_holder.alphas: {} outside (0, 0.5)", a));
    if (quasimetric_samples < 1)
        throw ConfigError("log_holder.quasimetric_samples: must be >= 1");
    if (!(control_p > 1) || !std::isfinite(control_p))
        throw ConfigError(fmt::format("positive_control.p: must be > 1 (got {})", control_p));
    if (!(tol > 0 && tol < 1))
        throw ConfigError(fmt::format("tol: must be in (0, 1) (got {})", tol));
}

RunConfig parse_config(const Json& j)
{
    RunConfig c;
    const Section root(j, "",
                       {"ellipsoid", "gammas", "exponent", "grids", "kernel", "alphas", "schedule",
                        "log_holder", "positive_control", "tol", "seed", "output"});
    if (root.has("ellipsoid")) {
        const auto s = root.child("ellipsoid", {"m1", "m2"});
        s.number("m1", c.m1);
        s.number("m2", c.m2);
    }
    if (root.has("gammas")) {
        const auto s = root.child("gammas", {"safety", "g1", "g2", "g3", "g4"});
        s.number("safety", c.gamma_safety);
        const int given = s.has("g1") + s.has("g2") + s.has("g3") + s.has("g4");
        if (given != 0 && given != 4)
            throw ConfigError("gammas: give all of g1, g2, g3, g4 or none");
        if (given == 4) {
            GammaConfig g;
            s.number("g1", g.g1);
            s.number("g2", g.g2);
            s.number("g3", g.g3);
            s.number("g4", g.g4);
            c.gamma_override = g;
        }
    }
    if (root.has("exponent")) {
        const auto s = root.child("exponent", {"p0", "A", "cap_point"});
        s.number("p0", c.field.p0);
        s.number("A", c.field.psi.amplitude);
        s.number("cap_point", c.field.psi.cap_point);
    }
    if (root.has("grids")) {
        const auto s = root.child("grids", {"patch", "v_eval"});
        if (s.has("patch")) {
            const auto p = s.child("patch", {"n_r", "n_t1", "n_t2", "rule"});
            p.integer("n_r", c.patch_grid.n_r);
            p.integer("n_t1", c.patch_grid.n_t1);
            p.integer("n_t2", c.patch_grid.n_t2);
            std::string rule(rule_name(c.patch_grid.rule));
            p.string("rule", rule);
            c.patch_grid.rule = parse_rule(rule, p.join("rule"));
        }
        if (s.has("v_eval")) {
            const auto v = s.child("v_eval", {"n_r", "n_t1", "n_t2"});
            v.integer("n_r", c.v_grid.n_r);
            v.integer("n_t1", c.v_grid.n_t1);
            v.integer("n_t2", c.v_grid.n_t2);
        }
    }
    if (root.has("kernel")) {
        const auto s = root.child("kernel", {"samples", "refine_steps"});
        s.integer("samples", c.kernel_samples);
        s.integer("refine_steps", c.kernel_refine_steps);
    }
    root.numbers("alphas", c.alphas);
    if (root.has("schedule")) {
        const auto s = root.child("schedule", {"n_max", "log_budget"});
        s.integer("n_max", c.n_max);
        s.number("log_budget", c.log_budget);
    }
    if (root.has("log_holder")) {
        const auto s = root.child("log_holder", {"alphas", "quasimetric_samples"});
        s.numbers("alphas", c.holder_alphas);
        s.integer("quasimetric_samples", c.quasimetric_samples);
    }
    if (root.has("positive_control")) {
        const auto s = root.child("positive_control", {"enabled", "p"});
        s.boolean("enabled", c.positive_control);
        s.number("p", c.control_p);
    }
    root.number("tol", c.tol);
    root.integer("seed", c.seed);
    if (root.has("output")) {
        const auto s = root.child("output", {"dir"});
        s.string("dir", c.out_dir);
    }
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open config file '{}'", path));
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& err) {
        throw ConfigError(fmt::format("{}: {}", path, err.what()));
    }
    return parse_config(j);
}

Json to_json(const RunConfig& c)
{
    Json j;
    j["ellipsoid"] = {{"m1", c.m1}, {"m2", c.m2}};
    if (c.gamma_override) {
        const auto& g = *c.gamma_override;
        j["gammas"] = {{"g1", g.g1}, {"g2", g.g2}, {"g3", g.g3}, {"g4", g.g4}};
    } else {
        j["gammas"] = {{"safety", c.gamma_safety}};
    }
    j["exponent"] = {{"p0", c.field.p0}, {"A", c.field.psi.amplitude},
                     {"cap_point", c.field.psi.cap_point}};
    j["grids"]["patch"] = {{"n_r", c.patch_grid.n_r},
                           {"n_t1", c.patch_grid.n_t1},
                           {"n_t2", c.patch_grid.n_t2},
                           {"rule", rule_name(c.patch_grid.rule)}};
    j["grids"]["v_eval"] = {{"n_r", c.v_grid.n_r}, {"n_t1", c.v_grid.n_t1}, {"n_t2", c.v_grid.n_t2}};
    j["kernel"] = {{"samples", c.kernel_samples}, {"refine_steps", c.kernel_refine_steps}};
    j["alphas"] = c.alphas;
    j["schedule"] = {{"n_max", c.n_max}, {"log_budget", c.log_budget}};
    j["log_holder"] = {{"alphas", c.holder_alphas}, {"quasimetric_samples", c.quasimetric_samples}};
    j["positive_control"] = {{"enabled", c.positive_control}, {"p", c.control_p}};
    j["tol"] = c.tol;
    j["seed"] = c.seed;
    j["output"] = {{"dir", c.out_dir}};
    return j;
}

} // namespace clf
