#include "cycleflow/synth.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>
#include <vector>

#include "cycleflow/errors.hpp"

namespace cycleflow {
namespace {

// Explicit draws on top of the raw engine: std::uniform_*_distribution is
// implementation-defined, which would break seed reproducibility across
// toolchains.
std::uint64_t draw_index(std::mt19937_64& rng, std::uint64_t bound) {
    return rng() % bound;
}

double draw_uniform(std::mt19937_64& rng, double lo, double hi) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + unit * (hi - lo);
}

// Uniform random labeled tree by decoding a random Pruefer sequence.
// Returns N-1 oriented edges.
std::vector<std::pair<int, int>> random_tree(std::mt19937_64& rng, int n) {
    if (n == 2) return {{0, 1}};
    std::vector<int> seq(n - 2);
    for (int& s : seq) s = static_cast<int>(draw_index(rng, n));

    std::vector<int> degree(n, 1);
    for (int s : seq) degree[s]++;

    std::vector<std::pair<int, int>> edges;
    edges.reserve(n - 1);
    int ptr = 0;
    while (degree[ptr] != 1) ++ptr;
    int leaf = ptr;
    for (int s : seq) {
        edges.emplace_back(leaf, s);
        if (--degree[s] == 1 && s < ptr) {
            leaf = s;
        } else {
            ++ptr;
            while (degree[ptr] != 1) ++ptr;
            leaf = ptr;
        }
    }
    edges.emplace_back(leaf, n - 1);
    return edges;
}

}  // namespace

Grid generate(const SynthSpec& spec) {
    if (spec.nodes < 2) {
        throw ValidationError("synthetic grid needs at least 2 nodes");
    }
    if (spec.chords < 0) {
        throw ValidationError("chord count must be non-negative");
    }
    if (!(spec.reactance_min > 0.0) || spec.reactance_max < spec.reactance_min) {
        throw ValidationError("reactance range must satisfy 0 < min <= max");
    }
    const std::int64_t n = spec.nodes;
    const std::int64_t free_pairs = n * (n - 1) / 2 - (n - 1);
    if (spec.chords > free_pairs) {
        throw ValidationError("infeasible chord count " + std::to_string(spec.chords) +
                              ": a simple graph on " + std::to_string(n) +
                              " nodes admits at most " + std::to_string(free_pairs) +
                              " chords");
    }

    std::mt19937_64 rng(spec.seed);
    auto tree_edges = random_tree(rng, spec.nodes);

    std::unordered_set<std::int64_t> used;
    used.reserve(tree_edges.size() + spec.chords);
    auto key = [n](int a, int b) {
        return static_cast<std::int64_t>(std::min(a, b)) * n + std::max(a, b);
    };
    for (const auto& [a, b] : tree_edges) used.insert(key(a, b));

    std::vector<std::pair<int, int>> chords;
    chords.reserve(spec.chords);
    if (static_cast<std::int64_t>(spec.chords) * 8 >= free_pairs) {
        // Dense request: enumerate the free pairs and take a random prefix.
        std::vector<std::pair<int, int>> pool;
        pool.reserve(free_pairs);
        for (int a = 0; a < spec.nodes; ++a) {
            for (int b = a + 1; b < spec.nodes; ++b) {
                if (!used.count(key(a, b))) pool.emplace_back(a, b);
            }
        }
        for (int i = 0; i < spec.chords; ++i) {
            const auto j = i + draw_index(rng, pool.size() - i);
            std::swap(pool[i], pool[j]);
            chords.push_back(pool[i]);
        }
    } else {
        while (static_cast<int>(chords.size()) < spec.chords) {
            const int a = static_cast<int>(draw_index(rng, spec.nodes));
            const int b = static_cast<int>(draw_index(rng, spec.nodes));
            if (a == b) continue;
            if (!used.insert(key(a, b)).second) continue;
            chords.emplace_back(std::min(a, b), std::max(a, b));
        }
    }

    std::vector<Bus> buses(spec.nodes);
    for (int i = 0; i < spec.nodes; ++i) buses[i].id = i + 1;

    std::vector<Branch> branches;
    branches.reserve(tree_edges.size() + chords.size());
    for (const auto& [a, b] : tree_edges) {
        branches.push_back(branch_from_reactance(
            a, b, draw_uniform(rng, spec.reactance_min, spec.reactance_max)));
    }
    for (const auto& [a, b] : chords) {
        branches.push_back(branch_from_reactance(
            a, b, draw_uniform(rng, spec.reactance_min, spec.reactance_max)));
    }

    const std::string name = "synth-n" + std::to_string(spec.nodes) + "-c" +
                             std::to_string(spec.chords) + "-s" +
                             std::to_string(spec.seed);
    return Grid(name, std::move(buses), std::move(branches), 0);
}

}  // namespace cycleflow
