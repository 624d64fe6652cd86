#include "erlmix/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace erlmix {

void ErlangMixture::validate() const {
    if (d < 1) throw std::invalid_argument("ErlangMixture: d < 1");
    if (n < 1) throw std::invalid_argument("ErlangMixture: n < 1");
    if (residual < 0.0) throw std::invalid_argument("ErlangMixture: residual < 0");
    double total = residual;
    std::set<ShapeIndex> seen;
    for (const auto& [m, w] : components) {
        if (static_cast<int>(m.size()) != d)
            throw std::invalid_argument("ErlangMixture: component dimension mismatch");
        for (auto mj : m)
            if (mj < 1) throw std::invalid_argument("ErlangMixture: shape < 1");
        if (w < 0.0) throw std::invalid_argument("ErlangMixture: negative weight");
        if (!seen.insert(m).second)
            throw std::invalid_argument("ErlangMixture: duplicate shape index");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("ErlangMixture: weights + residual != 1");
}

double mixture_pdf(const ErlangMixture& g, std::span<const double> x) {
    if (static_cast<int>(x.size()) != g.d)
        throw std::invalid_argument("mixture_pdf: dimension mismatch");
    double value = 0.0;
    for (const auto& [m, w] : g.components) {
        if (w == 0.0) continue;
        value += w * product_kernel_pdf(m, g.n, x);
    }
    return value;
}

double mixture_cdf_1d(const ErlangMixture& g, double x) {
    if (g.d != 1) throw std::invalid_argument("mixture_cdf_1d: d != 1");
    double value = 0.0;
    for (const auto& [m, w] : g.components) {
        if (w == 0.0) continue;
        value += w * erlang_cdf(ErlangParams(m[0], static_cast<double>(g.n)), x);
    }
    return value;
}

std::vector<double> mixture_tail_box(const ErlangMixture& g, double tail_mass) {
    std::vector<std::int64_t> max_shape(static_cast<std::size_t>(g.d), 1);
    for (const auto& [m, w] : g.components)
        for (int j = 0; j < g.d; ++j)
            max_shape[static_cast<std::size_t>(j)] =
                std::max(max_shape[static_cast<std::size_t>(j)], m[static_cast<std::size_t>(j)]);
    std::vector<double> box(static_cast<std::size_t>(g.d));
    for (int j = 0; j < g.d; ++j) {
        const auto mj = max_shape[static_cast<std::size_t>(j)];
        ErlangParams p(mj, static_cast<double>(g.n));
        // start past the largest mode and double until the survival tail drops
        double hi = (static_cast<double>(mj) + 10.0 * std::sqrt(static_cast<double>(mj))) /
                    static_cast<double>(g.n);
        while (erlang_sf(p, hi) > tail_mass) hi *= 2.0;
        box[static_cast<std::size_t>(j)] = hi;
    }
    return box;
}

nlohmann::json mixture_to_json(const ErlangMixture& g) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& [m, w] : g.components)
        comps.push_back({{"m", m}, {"w", w}});
    return nlohmann::json{{"version", kMixtureSchemaVersion},
                          {"d", g.d},
                          {"n", g.n},
                          {"components", std::move(comps)},
                          {"residual", g.residual}};
}

ErlangMixture mixture_from_json(const nlohmann::json& j) {
    const int version = j.at("version").get<int>();
    if (version > kMixtureSchemaVersion)
        throw std::runtime_error(
            "mixture schema version " + std::to_string(version) +
            " is newer than supported version " +
            std::to_string(kMixtureSchemaVersion));
    ErlangMixture g;
    g.d = j.at("d").get<int>();
    g.n = j.at("n").get<int>();
    g.residual = j.at("residual").get<double>();
    for (const auto& c : j.at("components")) {
        g.components.emplace_back(c.at("m").get<ShapeIndex>(),
                                  c.at("w").get<double>());
    }
    g.validate();
    return g;
}

}  // namespace erlmix
