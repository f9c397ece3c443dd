#include "disttest/maxflow.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace disttest {

MaxFlow::MaxFlow(int node_count) : graph_(node_count) {
    if (node_count <= 0) throw std::invalid_argument("maxflow: node count must be positive");
}

void MaxFlow::add_edge(int from, int to, long long capacity) {
    if (from < 0 || to < 0 || from >= static_cast<int>(graph_.size()) ||
        to >= static_cast<int>(graph_.size()))
        throw std::invalid_argument("maxflow: node out of range");
    graph_[from].push_back({to, capacity, static_cast<int>(graph_[to].size())});
    graph_[to].push_back({from, 0, static_cast<int>(graph_[from].size()) - 1});
}

bool MaxFlow::build_levels(int source, int sink) {
    level_.assign(graph_.size(), -1);
    std::queue<int> q;
    level_[source] = 0;
    q.push(source);
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (const Edge& e : graph_[v]) {
            if (e.cap > 0 && level_[e.to] < 0) {
                level_[e.to] = level_[v] + 1;
                q.push(e.to);
            }
        }
    }
    return level_[sink] >= 0;
}

long long MaxFlow::push(int v, int sink, long long limit) {
    if (v == sink) return limit;
    for (int& i = iter_[v]; i < static_cast<int>(graph_[v].size()); ++i) {
        Edge& e = graph_[v][i];
        if (e.cap <= 0 || level_[v] + 1 != level_[e.to]) continue;
        const long long pushed = push(e.to, sink, std::min(limit, e.cap));
        if (pushed > 0) {
            e.cap -= pushed;
            graph_[e.to][e.rev].cap += pushed;
            return pushed;
        }
    }
    return 0;
}

long long MaxFlow::max_flow(int source, int sink) {
    long long flow = 0;
    while (build_levels(source, sink)) {
        iter_.assign(graph_.size(), 0);
        long long pushed;
        while ((pushed = push(source, sink, kInf)) > 0) flow += pushed;
    }
    return flow;
}

std::vector<bool> MaxFlow::min_cut_source_side(int source) const {
    std::vector<bool> reach(graph_.size(), false);
    std::queue<int> q;
    reach[source] = true;
    q.push(source);
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (const Edge& e : graph_[v]) {
            if (e.cap > 0 && !reach[e.to]) {
                reach[e.to] = true;
                q.push(e.to);
            }
        }
    }
    return reach;
}

}  // namespace disttest
