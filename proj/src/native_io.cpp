#include "cycleflow/native_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "cycleflow/errors.hpp"
#include "cycleflow/matpower.hpp"

namespace cycleflow {
namespace {

using nlohmann::ordered_json;

void require_keys(const ordered_json& object, std::initializer_list<const char*> keys,
                  const std::string& where) {
    for (const char* key : keys) {
        if (!object.contains(key)) {
            throw ValidationError("grid JSON: missing key '" + std::string(key) + "' in " +
                                  where);
        }
    }
    for (const auto& [key, value] : object.items()) {
        if (std::find_if(keys.begin(), keys.end(),
                         [&](const char* k) { return key == k; }) == keys.end()) {
            throw ValidationError("grid JSON: unknown key '" + key + "' in " + where);
        }
    }
}

}  // namespace

Grid load_native(const std::string& json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("grid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("grid JSON: top level must be an object");
    require_keys(doc, {"name", "slack", "buses", "branches"}, "top level");
    if (!doc["name"].is_string()) throw ValidationError("grid JSON: 'name' must be a string");
    if (!doc["slack"].is_number_integer())
        throw ValidationError("grid JSON: 'slack' must be an integer bus id");
    if (!doc["buses"].is_array()) throw ValidationError("grid JSON: 'buses' must be an array");
    if (!doc["branches"].is_array())
        throw ValidationError("grid JSON: 'branches' must be an array");

    std::vector<Bus> buses;
    std::unordered_map<int, int> index_by_id;
    for (const auto& entry : doc["buses"]) {
        if (!entry.is_number_integer())
            throw ValidationError("grid JSON: bus ids must be integers");
        const int id = entry.get<int>();
        if (!index_by_id.emplace(id, static_cast<int>(buses.size())).second) {
            throw ValidationError("grid JSON: duplicate bus id " + std::to_string(id));
        }
        buses.push_back(Bus{id});
    }

    std::vector<Branch> branches;
    for (const auto& entry : doc["branches"]) {
        if (!entry.is_object())
            throw ValidationError("grid JSON: each branch must be an object");
        require_keys(entry, {"from", "to", "x"}, "branch");
        if (!entry["from"].is_number_integer() || !entry["to"].is_number_integer() ||
            !entry["x"].is_number()) {
            throw ValidationError("grid JSON: branch fields must be {from:int, to:int, x:number}");
        }
        const int from = entry["from"].get<int>();
        const int to = entry["to"].get<int>();
        auto from_it = index_by_id.find(from);
        auto to_it = index_by_id.find(to);
        if (from_it == index_by_id.end() || to_it == index_by_id.end()) {
            throw ValidationError("grid JSON: branch references unknown bus " +
                                  std::to_string(from_it == index_by_id.end() ? from : to));
        }
        const double x = entry["x"].get<double>();
        if (!(x > 0.0)) {
            throw ValidationError("grid JSON: branch " + std::to_string(from) + "-" +
                                  std::to_string(to) + " has non-positive reactance");
        }
        branches.push_back(branch_from_reactance(from_it->second, to_it->second, x));
    }

    const int slack_id = doc["slack"].get<int>();
    auto slack_it = index_by_id.find(slack_id);
    if (slack_it == index_by_id.end()) {
        throw ValidationError("grid JSON: slack bus id " + std::to_string(slack_id) +
                              " is not in the bus list");
    }
    return Grid(doc["name"].get<std::string>(), std::move(buses), std::move(branches),
                slack_it->second);
}

std::string save_native(const Grid& grid) {
    ordered_json doc;
    doc["name"] = grid.name();
    doc["slack"] = grid.id_of(grid.slack());
    auto& buses = doc["buses"] = ordered_json::array();
    for (const Bus& bus : grid.buses()) buses.push_back(bus.id);
    auto& branches = doc["branches"] = ordered_json::array();
    for (const Branch& br : grid.branches()) {
        branches.push_back(ordered_json{{"from", grid.id_of(br.tail)},
                                        {"to", grid.id_of(br.head)},
                                        {"x", br.reactance}});
    }
    return doc.dump(2) + "\n";
}

Grid load_grid_file(const std::filesystem::path& path) {
    std::ifstream stream(path);
    if (!stream) throw ValidationError("cannot open grid file: " + path.string());
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    if (path.extension() == ".json") return load_native(buffer.str());
    return parse_matpower_case(buffer.str());
}

}  // namespace cycleflow
