#include "iterplan/bench/scenario_io.hpp"

#include <fstream>
#include <sstream>

namespace iterplan::bench {

namespace {

geom::Vec2 parse_vec(const std::string& tok, const std::string& field) {
    const auto comma = tok.find(',');
    if (comma == std::string::npos) throw ScenarioError(field, "expected x,y");
    try {
        return {std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ScenarioError(field, "bad coordinate pair '" + tok + "'");
    }
}

double parse_num(const std::string& tok, const std::string& field) {
    try {
        return std::stod(tok);
    } catch (const std::exception&) {
        throw ScenarioError(field, "bad number '" + tok + "'");
    }
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
    Scenario scn;
    scn.road_branches.clear();
    std::string line;
    int lineno = 0;
    int group = -1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        const std::string where = key + " (line " + std::to_string(lineno) + ")";
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) toks.push_back(t);
        auto need = [&](std::size_t n) {
            if (toks.size() < n) throw ScenarioError(where, "expected " + std::to_string(n) + " fields");
        };
        if (key == "name") {
            need(1);
            scn.name = toks[0];
        } else if (key == "map") {
            need(4);
            scn.map_rect = {{parse_num(toks[0], where), parse_num(toks[1], where)},
                            {parse_num(toks[2], where), parse_num(toks[3], where)}};
        } else if (key == "road") {
            need(2);
            std::vector<geom::Vec2> branch;
            for (const auto& t : toks) branch.push_back(parse_vec(t, where));
            scn.road_branches.push_back(std::move(branch));
        } else if (key == "depot") {
            need(2);
            scn.depots.emplace_back(static_cast<int>(parse_num(toks[0], where)),
                                    static_cast<int>(parse_num(toks[1], where)));
        } else if (key == "vehicle") {
            need(3);
            Scenario::VehicleSpec v;
            if (toks[0] == "ugv")
                v.cls = core::VehicleClass::Ugv;
            else if (toks[0] == "uav")
                v.cls = core::VehicleClass::Uav;
            else
                throw ScenarioError(where, "class must be ugv or uav");
            v.start_km = parse_vec(toks[1], where);
            v.energy0_kj = parse_num(toks[2], where);
            if (v.cls == core::VehicleClass::Ugv) ++group;
            v.group = std::max(group, 0);
            scn.fleet.push_back(v);
        } else if (key == "site") {
            need(1);
            scn.sites.push_back(parse_vec(toks[0], where));
        } else if (key == "gamma_d") {
            need(1);
            scn.params.gamma_d_s = parse_num(toks[0], where);
        } else if (key == "spacing_road") {
            need(1);
            scn.params.spacing_road_km = parse_num(toks[0], where);
        } else if (key == "pitch_air") {
            need(1);
            scn.params.pitch_air_km = parse_num(toks[0], where);
        } else if (key == "levels_uav") {
            need(1);
            scn.params.levels_uav = static_cast<int>(parse_num(toks[0], where));
        } else if (key == "levels_ugv") {
            need(1);
            scn.params.levels_ugv = static_cast<int>(parse_num(toks[0], where));
        } else if (key == "budget_total") {
            need(1);
            scn.params.budget_total_s = parse_num(toks[0], where);
        } else if (key == "budget_tdo") {
            need(1);
            scn.params.budget_tdo_s = parse_num(toks[0], where);
        } else if (key == "step_budget") {
            need(1);
            scn.params.step_budget_s = parse_num(toks[0], where);
        } else if (key == "step") {
            need(1);
            scn.params.step_s = parse_num(toks[0], where);
        } else if (key == "horizon_steps") {
            need(1);
            scn.params.horizon_steps = static_cast<int>(parse_num(toks[0], where));
        } else if (key == "site_radius") {
            need(1);
            scn.params.site_radius_km = parse_num(toks[0], where);
        } else if (key == "seed") {
            need(1);
            scn.params.seed = static_cast<std::uint64_t>(parse_num(toks[0], where));
        } else {
            throw ScenarioError(where, "unknown key");
        }
    }
    // UAVs listed before any UGV join the first group.
    for (auto& v : scn.fleet)
        if (v.cls == core::VehicleClass::Uav && v.group < 0) v.group = 0;
    scn.validate();
    return scn;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ScenarioError("file", "cannot open " + path);
    return parse_scenario(f);
}

std::string format_scenario(const Scenario& scn) {
    std::ostringstream os;
    os.precision(12);
    os << "name " << scn.name << "\n";
    os << "map " << scn.map_rect.lo.x << " " << scn.map_rect.lo.y << " " << scn.map_rect.hi.x
       << " " << scn.map_rect.hi.y << "\n";
    os << "gamma_d " << scn.params.gamma_d_s << "\n";
    os << "spacing_road " << scn.params.spacing_road_km << "\n";
    os << "pitch_air " << scn.params.pitch_air_km << "\n";
    os << "levels_uav " << scn.params.levels_uav << "\n";
    os << "levels_ugv " << scn.params.levels_ugv << "\n";
    os << "budget_total " << scn.params.budget_total_s << "\n";
    if (scn.params.budget_tdo_s) os << "budget_tdo " << *scn.params.budget_tdo_s << "\n";
    os << "step_budget " << scn.params.step_budget_s << "\n";
    os << "step " << scn.params.step_s << "\n";
    os << "horizon_steps " << scn.params.horizon_steps << "\n";
    os << "site_radius " << scn.params.site_radius_km << "\n";
    os << "seed " << scn.params.seed << "\n";
    for (const auto& br : scn.road_branches) {
        os << "road";
        for (const auto& v : br) os << " " << v.x << "," << v.y;
        os << "\n";
    }
    for (auto [b, v] : scn.depots) os << "depot " << b << " " << v << "\n";
    for (const auto& v : scn.fleet)
        os << "vehicle " << (v.cls == core::VehicleClass::Ugv ? "ugv" : "uav") << " "
           << v.start_km.x << "," << v.start_km.y << " " << v.energy0_kj << "\n";
    for (const auto& s : scn.sites) os << "site " << s.x << "," << s.y << "\n";
    return os.str();
}

void save_scenario(const Scenario& scn, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ScenarioError("file", "cannot write " + path);
    f << format_scenario(scn);
}

}  // namespace iterplan::bench
