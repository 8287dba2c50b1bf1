#include "cycleflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <unordered_map>
#include <utility>

#include "cycleflow/errors.hpp"

namespace cycleflow {

Branch branch_from_reactance(int tail, int head, double reactance) {
    if (!(reactance > 0.0) || !std::isfinite(reactance)) {
        throw ValidationError("branch reactance must be positive and finite, got " +
                              std::to_string(reactance));
    }
    return Branch{tail, head, 1.0 / reactance, reactance};
}

Branch branch_from_susceptance(int tail, int head, double susceptance) {
    if (!(susceptance > 0.0) || !std::isfinite(susceptance)) {
        throw ValidationError("branch susceptance must be positive and finite, got " +
                              std::to_string(susceptance));
    }
    return Branch{tail, head, susceptance, 1.0 / susceptance};
}

std::vector<Branch> merge_parallel_lines(const std::vector<Branch>& raw) {
    std::vector<Branch> merged;
    merged.reserve(raw.size());
    std::map<std::pair<int, int>, std::size_t> position;
    for (const Branch& br : raw) {
        auto key = std::minmax(br.tail, br.head);
        auto [it, inserted] = position.try_emplace(key, merged.size());
        if (inserted) {
            merged.push_back(br);
        } else {
            Branch& first = merged[it->second];
            first.susceptance += br.susceptance;
            first.reactance = 1.0 / first.susceptance;
        }
    }
    return merged;
}

Grid::Grid(std::string name, std::vector<Bus> buses, std::vector<Branch> branches,
           int slack_index)
    : name_(std::move(name)), buses_(std::move(buses)), slack_(slack_index) {
    const int n = static_cast<int>(buses_.size());
    if (n < 2) {
        throw ValidationError("grid '" + name_ + "' needs at least 2 buses, got " +
                              std::to_string(n));
    }
    if (branches.empty()) {
        throw ValidationError("grid '" + name_ + "' has no branches");
    }
    if (slack_ < 0 || slack_ >= n) {
        throw ValidationError("slack index " + std::to_string(slack_) +
                              " out of range [0, " + std::to_string(n) + ")");
    }

    std::unordered_map<int, int> seen;
    seen.reserve(buses_.size());
    for (int i = 0; i < n; ++i) {
        if (!seen.emplace(buses_[i].id, i).second) {
            throw ValidationError("duplicate bus id " + std::to_string(buses_[i].id));
        }
    }

    for (const Branch& br : branches) {
        if (br.tail < 0 || br.tail >= n || br.head < 0 || br.head >= n) {
            throw ValidationError("branch endpoint out of range: " +
                                  std::to_string(br.tail) + " -> " +
                                  std::to_string(br.head));
        }
        if (br.tail == br.head) {
            throw ValidationError("self-loop at bus id " +
                                  std::to_string(buses_[br.tail].id));
        }
        if (!(br.susceptance > 0.0) || !std::isfinite(br.susceptance)) {
            throw ValidationError("non-positive susceptance on branch " +
                                  std::to_string(buses_[br.tail].id) + "-" +
                                  std::to_string(buses_[br.head].id));
        }
        if (std::abs(br.susceptance * br.reactance - 1.0) > 1e-12) {
            throw ValidationError("inconsistent susceptance/reactance pair on branch " +
                                  std::to_string(buses_[br.tail].id) + "-" +
                                  std::to_string(buses_[br.head].id));
        }
    }

    branches_ = merge_parallel_lines(branches);

    // Connectivity: BFS from the slack over the merged simple graph.
    std::vector<std::vector<int>> adjacency(n);
    for (const Branch& br : branches_) {
        adjacency[br.tail].push_back(br.head);
        adjacency[br.head].push_back(br.tail);
    }
    std::vector<int> component(n, -1);
    int component_count = 0;
    for (int start = 0; start < n; ++start) {
        if (component[start] >= 0) continue;
        const int c = component_count++;
        std::deque<int> queue{start};
        component[start] = c;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int v : adjacency[u]) {
                if (component[v] < 0) {
                    component[v] = c;
                    queue.push_back(v);
                }
            }
        }
    }
    if (component_count > 1) {
        std::vector<int> size(component_count, 0);
        for (int v = 0; v < n; ++v) size[component[v]]++;
        const int smallest =
            static_cast<int>(std::min_element(size.begin(), size.end()) - size.begin());
        int witness = -1;
        for (int v = 0; v < n; ++v) {
            if (component[v] == smallest) {
                witness = v;
                break;
            }
        }
        throw ValidationError("grid '" + name_ + "' is disconnected: bus " +
                              std::to_string(buses_[witness].id) +
                              " lies in a component of " +
                              std::to_string(size[smallest]) + " bus(es)");
    }
}

int Grid::index_of(int external_id) const {
    for (int i = 0; i < node_count(); ++i) {
        if (buses_[i].id == external_id) return i;
    }
    throw ValidationError("unknown bus id " + std::to_string(external_id));
}

}  // namespace cycleflow
