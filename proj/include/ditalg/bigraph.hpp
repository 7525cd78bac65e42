// Bigraphs: points with minimal-algebra factors, solid and dashed arrows.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ditalg/minalg.hpp"

namespace ditalg {

struct Point {
    std::string name;
    Factor factor;
};

struct Arrow {
    std::string name;
    int s = 0;
    int t = 0;
    bool dashed = false;
};

struct Bigraph {
    std::vector<Point> points;
    std::vector<Arrow> arrows;

    int point_index(const std::string& name) const;   // -1 when absent
    int arrow_index(const std::string& name) const;   // -1 when absent
    int add_point(const std::string& name, Factor f = Factor::trivial());
    int add_arrow(const std::string& name, const std::string& s, const std::string& t, bool dashed);
    int add_arrow(const std::string& name, int s, int t, bool dashed);
    // Throws on duplicate names or dangling endpoints.
    void validate() const;
    std::vector<int> solid() const;
    std::vector<int> dashed() const;
};

bool check_directed(const Bigraph& b);
// Point ids of an oriented cycle, if any.
std::optional<std::vector<int>> find_cycle(const Bigraph& b);
// Kahn order with ties broken by point id; throws on cycles.
std::vector<int> topological_order(const Bigraph& b);
// reach[i][j]: a path (possibly trivial) leads from i to j.
std::vector<std::vector<bool>> reachability(const Bigraph& b);

struct HeightMap {
    std::vector<int> point_height;
    std::vector<std::vector<int>> pair_height;  // [i][j]
};
HeightMap height_maps(const Bigraph& b);

}  // namespace ditalg
