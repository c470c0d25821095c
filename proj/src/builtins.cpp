#include "nonfail/builtins.hpp"

#include "nonfail/symbols.hpp"

namespace nonfail {

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {
        "failed", "error", "div", "mod", "+", "-", "*", "==", "/=", "<=", "<", ">", ">=",
        "allValues", "apply", "otherwise",
    };
    return names;
}

std::optional<Builtin> lookup_builtin(const std::string& name, int arity, const BuiltinOptions& options,
                                      const DepthKDomain& domain) {
    const auto any = AbstractValue::any();
    const auto bottom = AbstractValue::bottom();
    const auto true_v = domain.cons_top(Symbol::constructor(builtin::True, builtin::Bool, 0));
    const auto bool_v = lub(domain.cons_top(Symbol::constructor(builtin::False, builtin::Bool, 0)), true_v);
    auto tops = [](int n) { return std::vector<AbstractValue>(n, AbstractValue::any()); };

    Builtin b;
    int expected = -1;
    if (name == "failed") {
        expected = 0;
        b = {CallType::fail(), {}, bottom, BuiltinKind::Plain, true};
    } else if (name == "error") {
        expected = 1;
        bool fails = options.error_as_failure;
        b = {fails ? CallType::fail() : CallType::trivial(1), {{tops(1), bottom}}, bottom, BuiltinKind::Plain, fails};
    } else if (name == "div" || name == "mod") {
        expected = 2;
        b = {CallType::fail(), {{tops(2), any}}, any, BuiltinKind::Plain, false};
    } else if (name == "+" || name == "-" || name == "*") {
        expected = 2;
        b = {CallType::trivial(2), {{tops(2), any}}, any, BuiltinKind::Plain, false};
    } else if (name == "==" || name == "/=" || name == "<=" || name == "<" || name == ">" || name == ">=") {
        expected = 2;
        b = {CallType::trivial(2), {{tops(2), bool_v}}, bool_v, BuiltinKind::Plain, false};
    } else if (name == "allValues") {
        expected = 1;
        b = {CallType::trivial(1), {{tops(1), any}}, any, BuiltinKind::AllValues, false};
    } else if (name == "apply") {
        expected = 2;
        b = {CallType::trivial(2), {{tops(2), any}}, any, BuiltinKind::Apply, false};
    } else if (name == "otherwise") {
        expected = 0;
        b = {CallType::trivial(0), {{{}, true_v}}, true_v, BuiltinKind::Plain, false};
    }
    if (expected < 0 || expected != arity) return std::nullopt;
    return b;
}

}  // namespace nonfail
