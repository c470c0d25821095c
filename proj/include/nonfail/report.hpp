#pragma once

// Interface files, JSON reports and the text rendering of an analysis.
//
// Interface file `<Module>.nonfail.json`:
//   { "module", "domain": {"kind": "depthk", "k"}, "imports": [...],
//     "data": [{"name", "constructors": [{"name", "arity", "fields"?}]}],
//     "functions": { name: { "arity", "visibility", "external",
//                            "calltype": [absval] | "failing",
//                            "inout": [{"args": [absval], "result": absval}],
//                            "resultvalue": absval } } }
// Abstract values are written in their printed form (`{Cons(_,_),Nil}`).

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nonfail/calltype_checker.hpp"

namespace nonfail {

class InterfaceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using SymbolResolver = std::function<std::optional<Symbol>(const std::string& label)>;

/// Inverse of AbstractValue::str. Constructor labels are resolved by
/// `resolve`; literals are recognized syntactically. Throws InterfaceError.
AbstractValue parse_abstract_value(std::string_view text, const SymbolResolver& resolve);

/// Resolves constructor labels as seen from `module` with its imports.
SymbolResolver module_resolver(const SymbolTable& symbols, const std::string& module,
                               const std::vector<std::string>& imports);

nlohmann::json interface_json(const CoreProgram& program, const AnalysisResult& result);

/// Interface content plus status, requirements, result_values,
/// inout_types, iterations, summary and diagnostics.
nlohmann::json report_json(const CoreProgram& program, const AnalysisResult& result);

/// Module name, imports and signature recorded in an interface file.
struct InterfaceHeader {
    std::string module;
    std::vector<std::string> imports;
    ModuleSignature signature;
};

InterfaceHeader interface_header(const nlohmann::json& j);

/// Facts recorded in an interface file. The module's signature must already
/// be known to `symbols`. Refuses files written for a different domain.
Tables interface_tables(const nlohmann::json& j, const SymbolTable& symbols, const DomainConfig& domain);

nlohmann::json summary_json(const Summary& s);

/// `operations: 10/12  non-trivial in/out: ...  iterations: 2`.
std::string summary_row(const Summary& s);

/// Per-function lines with status and call type, failing reasons, then the
/// summary row.
std::string render_text(const AnalysisResult& result);

}  // namespace nonfail
