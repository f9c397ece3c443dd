#pragma once

// Dinic max-flow on integer capacities, used for exact minimum-weight
// closure computations (distance of a Boolean function to monotone).

#include <cstdint>
#include <vector>

namespace disttest {

class MaxFlow {
  public:
    explicit MaxFlow(int node_count);

    static constexpr long long kInf = 1LL << 60;

    void add_edge(int from, int to, long long capacity);
    long long max_flow(int source, int sink);

    // After max_flow: nodes reachable from the source in the residual graph.
    std::vector<bool> min_cut_source_side(int source) const;

  private:
    struct Edge {
        int to;
        long long cap;
        int rev;
    };

    bool build_levels(int source, int sink);
    long long push(int v, int sink, long long limit);

    std::vector<std::vector<Edge>> graph_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

}  // namespace disttest
