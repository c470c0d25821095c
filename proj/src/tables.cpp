#include "nonfail/tables.hpp"

#include <algorithm>

namespace nonfail {

bool CallType::is_trivial() const {
    return !failing && std::all_of(args.begin(), args.end(), [](const AbstractValue& a) { return a.is_any(); });
}

std::string CallType::str() const {
    if (failing) return "failing";
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? ", " : "") + args[i].str();
    return out + ")";
}

std::string IOEntry::str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? ", " : "") + args[i].str();
    return out + ") -> " + result.str();
}

std::strong_ordering operator<=>(const IOEntry& a, const IOEntry& b) {
    if (auto c = std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
        c != 0)
        return c;
    return a.result <=> b.result;
}

InOutType normalize_io(InOutType io) {
    std::map<std::vector<AbstractValue>, AbstractValue> merged;
    for (auto& e : io) {
        auto [it, inserted] = merged.emplace(e.args, e.result);
        if (!inserted) it->second = lub(it->second, e.result);
    }
    InOutType out;
    for (auto& [args, result] : merged) out.push_back({args, result});
    return out;
}

bool io_is_trivial(const InOutType& io) {
    return io.size() == 1 &&
           std::all_of(io[0].args.begin(), io[0].args.end(), [](const AbstractValue& a) { return a.is_any(); });
}

std::string io_str(const InOutType& io) {
    std::string out = "{";
    for (std::size_t i = 0; i < io.size(); ++i) out += (i ? ", " : "") + io[i].str();
    return out + "}";
}

}  // namespace nonfail
