#include "ditalg/bigraph.hpp"

#include <functional>
#include <queue>
#include <set>
#include <stdexcept>

namespace ditalg {

int Bigraph::point_index(const std::string& name) const {
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i].name == name) return static_cast<int>(i);
    return -1;
}

int Bigraph::arrow_index(const std::string& name) const {
    for (std::size_t i = 0; i < arrows.size(); ++i)
        if (arrows[i].name == name) return static_cast<int>(i);
    return -1;
}

int Bigraph::add_point(const std::string& name, Factor f) {
    if (point_index(name) >= 0) throw std::invalid_argument("duplicate point '" + name + "'");
    points.push_back({name, std::move(f)});
    return static_cast<int>(points.size()) - 1;
}

int Bigraph::add_arrow(const std::string& name, const std::string& s, const std::string& t, bool dashed) {
    int si = point_index(s), ti = point_index(t);
    if (si < 0 || ti < 0) throw std::invalid_argument("arrow '" + name + "' has an unknown endpoint");
    return add_arrow(name, si, ti, dashed);
}

int Bigraph::add_arrow(const std::string& name, int s, int t, bool dashed) {
    if (arrow_index(name) >= 0) throw std::invalid_argument("duplicate arrow '" + name + "'");
    arrows.push_back({name, s, t, dashed});
    return static_cast<int>(arrows.size()) - 1;
}

void Bigraph::validate() const {
    std::set<std::string> names;
    for (const auto& p : points)
        if (!names.insert(p.name).second) throw std::invalid_argument("duplicate point '" + p.name + "'");
    names.clear();
    int n = static_cast<int>(points.size());
    for (const auto& a : arrows) {
        if (!names.insert(a.name).second) throw std::invalid_argument("duplicate arrow '" + a.name + "'");
        if (a.s < 0 || a.s >= n || a.t < 0 || a.t >= n)
            throw std::invalid_argument("arrow '" + a.name + "' has an invalid endpoint");
    }
}

std::vector<int> Bigraph::solid() const {
    std::vector<int> v;
    for (std::size_t i = 0; i < arrows.size(); ++i)
        if (!arrows[i].dashed) v.push_back(static_cast<int>(i));
    return v;
}

std::vector<int> Bigraph::dashed() const {
    std::vector<int> v;
    for (std::size_t i = 0; i < arrows.size(); ++i)
        if (arrows[i].dashed) v.push_back(static_cast<int>(i));
    return v;
}

std::optional<std::vector<int>> find_cycle(const Bigraph& b) {
    int n = static_cast<int>(b.points.size());
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
    for (const auto& a : b.arrows) out[static_cast<std::size_t>(a.s)].push_back(a.t);
    std::vector<int> state(static_cast<std::size_t>(n), 0), parent(static_cast<std::size_t>(n), -1);
    std::optional<std::vector<int>> cycle;
    std::function<bool(int)> dfs = [&](int u) {
        state[static_cast<std::size_t>(u)] = 1;
        for (int v : out[static_cast<std::size_t>(u)]) {
            if (state[static_cast<std::size_t>(v)] == 1) {
                std::vector<int> c{v};
                for (int w = u; w != v; w = parent[static_cast<std::size_t>(w)]) c.push_back(w);
                cycle = std::vector<int>(c.rbegin(), c.rend());
                return true;
            }
            if (state[static_cast<std::size_t>(v)] == 0) {
                parent[static_cast<std::size_t>(v)] = u;
                if (dfs(v)) return true;
            }
        }
        state[static_cast<std::size_t>(u)] = 2;
        return false;
    };
    for (int i = 0; i < n; ++i)
        if (state[static_cast<std::size_t>(i)] == 0 && dfs(i)) break;
    return cycle;
}

bool check_directed(const Bigraph& b) { return !find_cycle(b).has_value(); }

std::vector<int> topological_order(const Bigraph& b) {
    std::size_t n = b.points.size();
    std::vector<int> indeg(n, 0);
    for (const auto& a : b.arrows) ++indeg[static_cast<std::size_t>(a.t)];
    std::priority_queue<int, std::vector<int>, std::greater<int>> q;
    for (std::size_t i = 0; i < n; ++i)
        if (indeg[i] == 0) q.push(static_cast<int>(i));
    std::vector<int> order;
    while (!q.empty()) {
        int u = q.top();
        q.pop();
        order.push_back(u);
        for (const auto& a : b.arrows)
            if (a.s == u && --indeg[static_cast<std::size_t>(a.t)] == 0) q.push(a.t);
    }
    if (order.size() != n) throw std::invalid_argument("bigraph is not directed");
    return order;
}

std::vector<std::vector<bool>> reachability(const Bigraph& b) {
    std::size_t n = b.points.size();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
    for (const auto& a : b.arrows) r[static_cast<std::size_t>(a.s)][static_cast<std::size_t>(a.t)] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (r[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (r[k][j]) r[i][j] = true;
    return r;
}

HeightMap height_maps(const Bigraph& b) {
    std::vector<int> order = topological_order(b);
    std::size_t n = b.points.size();
    HeightMap hm;
    hm.point_height.assign(n, 0);
    for (int u : order)
        for (const auto& a : b.arrows)
            if (a.t == u)
                hm.point_height[static_cast<std::size_t>(u)] =
                    std::max(hm.point_height[static_cast<std::size_t>(u)], hm.point_height[static_cast<std::size_t>(a.s)] + 1);
    // Pair order: (i,j) <= (i',j') iff i' <= i and j <= j'.
    auto reach = reachability(b);
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pairs.push_back({static_cast<int>(i), static_cast<int>(j)});
    auto below = [&](std::pair<int, int> x, std::pair<int, int> y) {
        // x < y strictly
        if (x == y) return false;
        return reach[static_cast<std::size_t>(y.first)][static_cast<std::size_t>(x.first)] &&
               reach[static_cast<std::size_t>(x.second)][static_cast<std::size_t>(y.second)];
    };
    hm.pair_height.assign(n, std::vector<int>(n, -1));
    // Longest chain below each pair, by repeated relaxation (the poset is finite).
    std::function<int(std::pair<int, int>)> height = [&](std::pair<int, int> p) -> int {
        int& memo = hm.pair_height[static_cast<std::size_t>(p.first)][static_cast<std::size_t>(p.second)];
        if (memo >= 0) return memo;
        int h = 0;
        for (const auto& q : pairs)
            if (below(q, p)) h = std::max(h, height(q) + 1);
        memo = h;
        return h;
    };
    for (const auto& p : pairs) height(p);
    return hm;
}

}  // namespace ditalg
