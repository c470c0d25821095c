#include "nonfail/terms.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace nonfail {

std::vector<Literal> literal_pool(const std::vector<Literal>& extra) {
    std::set<Literal> pool;
    for (int i = -2; i <= 3; ++i) pool.insert(Literal::integer(i));
    pool.insert(Literal::character('a'));
    pool.insert(Literal::character('b'));
    pool.insert(extra.begin(), extra.end());
    return {pool.begin(), pool.end()};
}

std::vector<Literal> literals_of(const CoreProgram& program) {
    std::set<Literal> out;
    for (const auto& f : program.functions) {
        if (!f.body) continue;
        for_each_subexpr(*f.body, [&](const Expr& e) {
            if (const auto* l = e.as<LitExpr>()) out.insert(l->lit);
            if (const auto* c = e.as<CaseExpr>()) {
                for (const auto& b : c->branches) {
                    if (b.pattern.kind == Pattern::Kind::Lit) out.insert(b.pattern.lit);
                }
            }
        });
    }
    return {out.begin(), out.end()};
}

TermEnumerator::TermEnumerator(const SymbolTable& symbols, std::vector<Literal> pool,
                               std::function<std::vector<DataTerm>(const Type&)> functions)
    : symbols_(symbols), pool_(std::move(pool)), functions_(std::move(functions)) {}

namespace {

Type substitute(const TypeExpr& t, const std::map<std::string, Type>& params) {
    if (t.is_var) {
        auto it = params.find(t.var);
        return it == params.end() ? Type::constructor(builtin::Bool) : it->second;
    }
    std::vector<Type> args;
    for (const auto& a : t.args) args.push_back(substitute(a, params));
    return Type::constructor(t.con, std::move(args));
}

/// Calls fn with every way of writing `total` as an ordered sum of `parts`
/// positive integers.
template <class Fn>
void compositions(int total, int parts, std::vector<int>& prefix, Fn&& fn) {
    if (parts == 0) {
        if (total == 0) fn(prefix);
        return;
    }
    for (int first = 1; first <= total - (parts - 1); ++first) {
        prefix.push_back(first);
        compositions(total - first, parts - 1, prefix, fn);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<Type> TermEnumerator::field_types(const ConstructorInfo& ctor, const Type& t) const {
    const auto* data = symbols_.data(ctor.type);
    std::map<std::string, Type> params;
    for (std::size_t i = 0; i < data->params.size() && i < t.args.size(); ++i) params.emplace(data->params[i], t.args[i]);
    std::vector<Type> out;
    if (ctor.decl->fields) {
        for (const auto& f : *ctor.decl->fields) out.push_back(substitute(f, params));
    } else {
        out.assign(ctor.arity, Type::constructor(builtin::Bool));
    }
    return out;
}

const std::vector<DataTerm>& TermEnumerator::exactly(const Type& type, int size) {
    Type t = ground(type);
    auto key = std::make_pair(t, size);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::vector<DataTerm> out;
    if (size >= 1) {
        if (t.is_arrow()) {
            if (size == 1 && functions_) out = functions_(t);
        } else if (t.con == builtin::Int || t.con == builtin::Char) {
            auto kind = t.con == builtin::Int ? Literal::Kind::Int : Literal::Kind::Char;
            if (size == 1) {
                for (const auto& l : pool_) {
                    if (l.kind == kind) out.push_back(DataTerm::literal(l));
                }
            }
        } else if (symbols_.data(t.con) != nullptr) {
            for (const auto* ctor : symbols_.constructors_of(t.con)) {
                if (ctor->arity == 0) {
                    if (size == 1) out.push_back(DataTerm::constructor(ctor->name));
                    continue;
                }
                auto fields = field_types(*ctor, t);
                std::vector<int> prefix;
                compositions(size - 1, ctor->arity, prefix, [&](const std::vector<int>& parts) {
                    std::vector<std::vector<DataTerm>> choices;
                    for (std::size_t i = 0; i < parts.size(); ++i) choices.push_back(exactly(fields[i], parts[i]));
                    std::vector<DataTerm> current;
                    auto product = [&](auto& self, std::size_t i) -> void {
                        if (i == choices.size()) {
                            out.push_back(DataTerm::constructor(ctor->name, current));
                            return;
                        }
                        for (const auto& c : choices[i]) {
                            current.push_back(c);
                            self(self, i + 1);
                            current.pop_back();
                        }
                    };
                    product(product, 0);
                });
            }
        }
    }
    return memo_.emplace(key, std::move(out)).first->second;
}

std::vector<DataTerm> TermEnumerator::up_to(const Type& t, int max_size) {
    std::vector<DataTerm> out;
    for (int n = 1; n <= max_size; ++n) {
        const auto& terms = exactly(t, n);
        out.insert(out.end(), terms.begin(), terms.end());
    }
    return out;
}

std::vector<DataTerm> TermEnumerator::members(const AbstractValue& a, const Type& t, int max_size) {
    std::vector<DataTerm> out;
    if (a.is_bottom()) return out;
    for (int n = 1; n <= max_size; ++n) {
        for (const auto& term : exactly(t, n)) {
            if (member(term, a)) out.push_back(term);
        }
    }
    return out;
}

std::vector<DataTerm> enumerate_terms(const AbstractValue& a, const SymbolTable& symbols, int max_size,
                                      const std::vector<Literal>& extra_literals) {
    if (a.is_bottom()) return {};
    if (a.is_any()) throw std::invalid_argument("enumerating Any needs a type");
    const auto& head = a.shapes().front().head;
    Type t = Type::constructor(head.type);
    if (head.kind == Symbol::Kind::Constructor) {
        const auto* data = symbols.data(head.type);
        t.args.assign(data->params.size(), Type::constructor(builtin::Bool));
    }
    TermEnumerator e(symbols, literal_pool(extra_literals));
    return e.members(a, t, max_size);
}

}  // namespace nonfail
