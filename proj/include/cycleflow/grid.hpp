#pragma once

#include <string>
#include <vector>

namespace cycleflow {

/// A bus. External ids are arbitrary unique integers; the internal index of
/// a bus is its position in Grid::buses().
struct Bus {
    int id;

    friend bool operator==(const Bus&, const Bus&) = default;
};

/// An oriented branch (transmission line or transformer) between two
/// internal bus indices. Positive flow runs tail -> head.
struct Branch {
    int tail;
    int head;
    double susceptance;  // b > 0, p.u.
    double reactance;    // x = 1/b, p.u.

    friend bool operator==(const Branch&, const Branch&) = default;
};

/// Branch from a per-unit reactance; susceptance is the reciprocal.
Branch branch_from_reactance(int tail, int head, double reactance);

/// Branch from a per-unit susceptance; reactance is the reciprocal.
Branch branch_from_susceptance(int tail, int head, double susceptance);

/// Collapse branches that share an unordered node pair into a single branch.
/// Parallel admittances add, so the merged susceptance is the sum of the
/// member susceptances; orientation and position come from the first member.
std::vector<Branch> merge_parallel_lines(const std::vector<Branch>& raw);

/// An immutable, normalized grid: a simple connected graph with dense
/// 0-based bus and line indices and a designated slack bus. Construction
/// merges parallel branches and validates every invariant; instances are
/// safe to share across threads.
class Grid {
public:
    /// Normalizes (merges parallel branches) and validates. Throws
    /// ValidationError on: fewer than 2 buses, no branches, duplicate bus
    /// ids, out-of-range branch endpoints, self-loops, non-positive
    /// susceptance, or a disconnected graph (the message names a bus in the
    /// smallest component).
    Grid(std::string name, std::vector<Bus> buses, std::vector<Branch> branches,
         int slack_index);

    const std::string& name() const noexcept { return name_; }
    int node_count() const noexcept { return static_cast<int>(buses_.size()); }
    int line_count() const noexcept { return static_cast<int>(branches_.size()); }
    /// Dimension of the cycle space, L - N + 1.
    int cycle_count() const noexcept { return line_count() - node_count() + 1; }
    int slack() const noexcept { return slack_; }

    const std::vector<Bus>& buses() const noexcept { return buses_; }
    const std::vector<Branch>& branches() const noexcept { return branches_; }

    /// Internal index for an external bus id; throws ValidationError if the
    /// id is unknown.
    int index_of(int external_id) const;
    int id_of(int index) const { return buses_.at(index).id; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::string name_;
    std::vector<Bus> buses_;
    std::vector<Branch> branches_;
    int slack_;
};

}  // namespace cycleflow
