#pragma once

// Bounded, type-directed enumeration of ground data terms.

#include <functional>
#include <map>
#include <vector>

#include "nonfail/abstract_domain.hpp"
#include "nonfail/symbols.hpp"
#include "nonfail/types.hpp"

namespace nonfail {

/// Literals substituted at Int and Char positions: -2..3 and 'a','b', plus
/// `extra` (typically every literal occurring in the analyzed programs).
std::vector<Literal> literal_pool(const std::vector<Literal>& extra = {});

std::vector<Literal> literals_of(const CoreProgram& program);

class TermEnumerator {
public:
    /// `functions` supplies the values of function types (size 1 each).
    TermEnumerator(const SymbolTable& symbols, std::vector<Literal> pool,
                   std::function<std::vector<DataTerm>(const Type&)> functions = {});

    /// All terms of ground type `t` with exactly `size` nodes, in a fixed
    /// order: constructors in declaration order, children lexicographic.
    const std::vector<DataTerm>& exactly(const Type& t, int size);
    /// All terms of size 1..max_size, smaller first.
    std::vector<DataTerm> up_to(const Type& t, int max_size);
    /// The terms of up_to that are members of `a`.
    std::vector<DataTerm> members(const AbstractValue& a, const Type& t, int max_size);

    /// Field types of `ctor` when its result type is `t`.
    std::vector<Type> field_types(const ConstructorInfo& ctor, const Type& t) const;

private:
    const SymbolTable& symbols_;
    std::vector<Literal> pool_;
    std::function<std::vector<DataTerm>(const Type&)> functions_;
    std::map<std::pair<Type, int>, std::vector<DataTerm>> memo_;
};

/// Enumeration without an explicit type: the type is read off the head
/// constructors of `a` with type parameters instantiated to Bool. Bottom
/// gives no terms; Any has no type and throws std::invalid_argument.
std::vector<DataTerm> enumerate_terms(const AbstractValue& a, const SymbolTable& symbols, int max_size,
                                      const std::vector<Literal>& extra_literals = {});

}  // namespace nonfail
