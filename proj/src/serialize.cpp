#include "hardylab/serialize.hpp"

#include <stdexcept>

namespace hardylab {

using nlohmann::json;

json warping_to_json(const WarpingSpec& spec) {
    json j;
    j["kind"] = to_string(spec.kind());
    if (spec.kind() == WarpKind::scaled_sinh) j["lambda"] = spec.lambda();
    if (spec.kind() == WarpKind::tabulated) {
        json samples = json::array();
        for (const auto& [r, p] : spec.samples()) samples.push_back({r, p});
        j["samples"] = samples;
    }
    return j;
}

WarpingSpec warping_from_json(const json& j) {
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw std::domain_error("warping: missing string field 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "euclidean") return WarpingSpec::euclidean();
    if (kind == "hyperbolic") return WarpingSpec::hyperbolic();
    if (kind == "scaled_sinh") {
        if (!j.contains("lambda"))
            throw std::domain_error("warping: scaled_sinh requires 'lambda'");
        return WarpingSpec::scaled_sinh(j.at("lambda").get<double>());
    }
    if (kind == "tabulated") {
        if (!j.contains("samples"))
            throw std::domain_error("warping: tabulated requires 'samples'");
        std::vector<std::pair<double, double>> samples;
        for (const auto& row : j.at("samples"))
            samples.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
        return WarpingSpec::tabulated(std::move(samples));
    }
    throw std::domain_error("warping: unknown kind '" + kind + "'");
}

RadialProfile profile_from_json(int N, const json& j) {
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw std::domain_error("profile: missing string field 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    auto num = [&j](const char* key, double fallback) {
        return j.contains(key) ? j.at(key).get<double>() : fallback;
    };
    if (kind == "bump") return RadialProfile::bump(num("amplitude", 1.0), num("radius", 1.0));
    if (kind == "truncated_power")
        return RadialProfile::truncated_power(num("amplitude", 1.0),
                                              num("exponent", 0.5 * (2 - N)),
                                              num("window_lo", 1e-3), num("window_hi", 1e3));
    if (kind == "piecewise_linear" || kind == "custom_breakpoints") {
        if (!j.contains("breakpoints") || !j.contains("values"))
            throw std::domain_error("profile: " + kind + " requires breakpoints/values");
        std::vector<double> r = j.at("breakpoints").get<std::vector<double>>();
        std::vector<double> v = j.at("values").get<std::vector<double>>();
        if (kind == "piecewise_linear") return RadialProfile::piecewise_linear(r, v);
        std::vector<std::pair<double, double>> samples;
        for (size_t i = 0; i < r.size() && i < v.size(); ++i) samples.push_back({r[i], v[i]});
        return RadialProfile::pchip(std::move(samples));
    }
    if (kind == "phi_eps") {
        const double eps = num("epsilon", 0.1);
        if (j.contains("scale") || j.contains("cutoff"))
            return RadialProfile::phi_eps_windowed(N, eps, num("scale", 1e-8),
                                                   num("cutoff", 0.1));
        return RadialProfile::phi_eps(N, eps);
    }
    if (kind == "extremal") return RadialProfile::extremal(N, num("a", 1.0));
    throw std::domain_error("profile: unknown kind '" + kind + "'");
}

SectorFunction sector_function_from_json(const ModelManifold& m, const json& j) {
    if (!j.contains("sectors") || !j.at("sectors").is_array() || j.at("sectors").empty())
        throw std::domain_error("sector function: nonempty 'sectors' array required");
    std::vector<Sector> sectors;
    for (const auto& sec : j.at("sectors")) {
        const double frac = sec.at("weight_fraction").get<double>();
        sectors.push_back(
            {frac * m.sphere_area(), profile_from_json(m.dim(), sec.at("profile"))});
    }
    return SectorFunction(m, std::move(sectors));
}

SectorFunction catalog_function(const ModelManifold& m, const std::string& name) {
    const int N = m.dim();
    if (name == "bump") return SectorFunction::radial(m, RadialProfile::bump(1.0, 1.0));
    if (name == "poly_bump")
        return SectorFunction::radial(m, RadialProfile::power_bump(1.0, 0.0, 1.0, 0.0, 2.0));
    if (name == "tent")
        return SectorFunction::radial(m,
                                      RadialProfile::piecewise_linear({0.0, 1.0}, {1.0, 0.0}));
    if (name == "indicator")
        return SectorFunction::radial(m, RadialProfile::indicator(1.0, 1.0));
    if (name == "phi_eps")
        return SectorFunction::radial(m, RadialProfile::phi_eps(N, 0.1));
    if (name == "shell_bump")
        return SectorFunction::radial(m, RadialProfile::power_bump(1.0, 1.0, 2.0, 2.0, 2.0));
    if (name == "truncated_extremal")
        return SectorFunction::radial(
            m, RadialProfile::truncated_power(1.0, 0.5 * (2 - N), 1e-3, 1e3));
    if (name == "two_sector") {
        auto f1 = RadialProfile::piecewise_linear({0.0, 1.0, 2.0}, {1.0, 0.4, 0.0});
        auto f2 = RadialProfile::piecewise_linear({0.0, 1.0, 2.0}, {0.3, 0.9, 0.0});
        const double w = 0.5 * m.sphere_area();
        return SectorFunction(m, {Sector{w, f1}, Sector{m.sphere_area() - w, f2}});
    }
    throw std::domain_error("catalog function: unknown name '" + name + "'");
}

}  // namespace hardylab
