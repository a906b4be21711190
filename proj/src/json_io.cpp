#include "dickesim/json_io.hpp"

#include <json.hpp>

namespace dsim {

using nlohmann::json;

namespace {

json complex_to_json(const cd& z) { return json::array({z.real(), z.imag()}); }

cd complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::domain_error("expected [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string to_json(const symstate::PureState& psi) {
    json j;
    j["n"] = psi.n();
    json amps = json::array();
    for (const cd& a : psi.amplitudes()) amps.push_back(complex_to_json(a));
    j["amp"] = std::move(amps);
    return j.dump();
}

std::string to_json(const DensityMatrix& rho) {
    json j;
    j["n"] = rho.n();
    json rows = json::array();
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < rho.dim(); ++k) row.push_back(complex_to_json(rho(i, k)));
        rows.push_back(std::move(row));
    }
    j["rho"] = std::move(rows);
    return j.dump();
}

symstate::PureState pure_state_from_json(const std::string& text) {
    const json j = json::parse(text);
    const int n = j.at("n").get<int>();
    std::vector<cd> amp;
    for (const auto& item : j.at("amp")) amp.push_back(complex_from_json(item));
    return symstate::PureState(n, std::move(amp));
}

DensityMatrix density_from_json(const std::string& text) {
    const json j = json::parse(text);
    const int n = j.at("n").get<int>();
    std::vector<cd> m;
    for (const auto& row : j.at("rho"))
        for (const auto& item : row) m.push_back(complex_from_json(item));
    return DensityMatrix(n, std::move(m));
}

bool json_is_density(const std::string& text) {
    const json j = json::parse(text);
    return j.contains("rho");
}

}  // namespace dsim
