#include "nonfail/call_graph.hpp"

#include <algorithm>
#include <functional>

namespace nonfail {

std::map<QName, std::set<QName>> callees(const CoreProgram& program) {
    std::map<QName, std::set<QName>> out;
    for (const auto& f : program.functions) {
        auto& set = out[f.name];
        if (!f.body) continue;
        for_each_subexpr(*f.body, [&](const Expr& e) {
            if (const auto* c = e.as<CallExpr>()) set.insert(c->func);
        });
    }
    return out;
}

std::vector<std::vector<QName>> components_bottom_up(const CoreProgram& program) {
    auto graph = callees(program);
    std::map<QName, int> order;
    for (const auto& f : program.functions) order.emplace(f.name, static_cast<int>(order.size()));

    // Tarjan's algorithm; components are emitted callees first.
    std::map<QName, int> index, low;
    std::set<QName> on_stack;
    std::vector<QName> stack;
    std::vector<std::vector<QName>> out;
    int counter = 0;

    std::function<void(const QName&)> visit = [&](const QName& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack.insert(v);
        for (const auto& w : graph[v]) {
            if (!order.count(w)) continue;
            if (!index.count(w)) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack.count(w)) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<QName> comp;
            QName w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack.erase(w);
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end(), [&](const QName& a, const QName& b) { return order[a] < order[b]; });
            out.push_back(std::move(comp));
        }
    };
    for (const auto& f : program.functions) {
        if (!index.count(f.name)) visit(f.name);
    }
    return out;
}

}  // namespace nonfail
