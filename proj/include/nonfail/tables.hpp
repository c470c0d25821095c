#pragma once

// Per-function analysis facts: result values R, in/out types IO and call
// types CT.

#include <map>
#include <string>
#include <vector>

#include "nonfail/abstract_domain.hpp"

namespace nonfail {

struct CallType {
    /// Failing: no argument tuple is known to be safe.
    bool failing = false;
    std::vector<AbstractValue> args;

    static CallType trivial(int arity) { return {false, std::vector<AbstractValue>(arity, AbstractValue::any())}; }
    static CallType fail() { return {true, {}}; }

    bool is_trivial() const;
    /// `(_)`, `({Cons(_,_)}, _)` or `failing`.
    std::string str() const;

    friend bool operator==(const CallType&, const CallType&) = default;
};

struct IOEntry {
    std::vector<AbstractValue> args;
    AbstractValue result;

    /// `({Nil}) -> {True}`; arity 0 prints `() -> ...`.
    std::string str() const;

    friend bool operator==(const IOEntry&, const IOEntry&) = default;
    friend std::strong_ordering operator<=>(const IOEntry& a, const IOEntry& b);
};

/// Disjunction of entries; kept normalized (see normalize_io).
using InOutType = std::vector<IOEntry>;

/// Merges entries with equal argument tuples by result lub and sorts.
InOutType normalize_io(InOutType io);

/// Trivial: a single entry whose arguments are all Any.
bool io_is_trivial(const InOutType& io);

std::string io_str(const InOutType& io);

/// Facts about every known function, local or imported.
struct Tables {
    std::map<QName, AbstractValue> result;
    std::map<QName, InOutType> inout;
    std::map<QName, CallType> calltype;
};

}  // namespace nonfail
