#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nonfail/core_ir.hpp"

namespace nonfail {

/// Name of the implicit module that owns Bool, List, Unit and the literal
/// types Int and Char.
inline const std::string kBuiltinModule = "Builtin";

namespace builtin {
inline const QName Bool{kBuiltinModule, "Bool"};
inline const QName False{kBuiltinModule, "False"};
inline const QName True{kBuiltinModule, "True"};
inline const QName List{kBuiltinModule, "List"};
inline const QName Nil{kBuiltinModule, "Nil"};
inline const QName Cons{kBuiltinModule, "Cons"};
inline const QName Unit{kBuiltinModule, "Unit"};
inline const QName UnitCtor{kBuiltinModule, "Unit"};
inline const QName Int{kBuiltinModule, "Int"};
inline const QName Char{kBuiltinModule, "Char"};
inline const QName Arrow{kBuiltinModule, "->"};
}  // namespace builtin

/// Declarations of the implicit builtin module.
const std::vector<DataDecl>& builtin_data();

const QName& literal_type(const Literal& l);

struct FuncSig {
    QName name;
    int arity = 0;
    Visibility visibility = Visibility::Public;
    bool external = false;
};

/// What importers need to know about a module in order to resolve names.
struct ModuleSignature {
    std::string module;
    std::vector<DataDecl> data;
    std::vector<FuncSig> functions;
};

ModuleSignature signature_of(const CoreProgram& program);

struct ConstructorInfo {
    QName name;
    int arity = 0;
    QName type;
    int index = 0;  // position within the data declaration
    const ConstructorDecl* decl = nullptr;
};

/// Global view of every loaded module: the builtins, imported signatures
/// and the module under analysis.
class SymbolTable {
public:
    SymbolTable();
    SymbolTable(const SymbolTable&) = delete;
    SymbolTable& operator=(const SymbolTable&) = delete;

    /// Registers a module. Fails on redeclaration of a builtin type or
    /// constructor, and on loading the same module twice.
    void add(const ModuleSignature& sig);

    bool has_module(const std::string& module) const { return modules_.count(module) != 0; }

    const ConstructorInfo* constructor(const QName& name) const;
    const DataDecl* data(const QName& type) const;
    const FuncSig* function(const QName& name) const;

    /// Constructors of a declared type in declaration order. Throws
    /// std::out_of_range for unknown or open (literal) types.
    std::vector<const ConstructorInfo*> constructors_of(const QName& type) const;

    /// Name lookup from inside `module`, whose imports are `imports`:
    /// local declarations first, then imported ones, then builtins.
    /// Returns nullopt when nothing matches; throws IrError on ambiguity.
    std::optional<QName> lookup_constructor(const std::string& module, const std::vector<std::string>& imports,
                                            const std::string& name, SourcePos pos = {}) const;
    std::optional<QName> lookup_function(const std::string& module, const std::vector<std::string>& imports,
                                         const std::string& name, SourcePos pos = {}) const;
    std::optional<QName> lookup_type(const std::string& module, const std::vector<std::string>& imports,
                                     const std::string& name, SourcePos pos = {}) const;

private:
    struct ModuleEntry {
        std::vector<DataDecl> data;
        std::vector<FuncSig> functions;
    };
    // Entries are held in a std::map so ConstructorInfo::decl stays valid.
    std::map<std::string, ModuleEntry> modules_;
    std::map<QName, ConstructorInfo> constructors_;
    std::map<QName, const DataDecl*> types_;
    std::map<QName, const FuncSig*> functions_;

    template <class Pred>
    std::optional<QName> lookup(const std::string& module, const std::vector<std::string>& imports,
                                const std::string& name, SourcePos pos, const char* what, Pred exists) const;
};

/// Qualifies every reference in `program` and validates constructor
/// arities, pattern arities and call arities (partial applications are
/// allowed; over-application is not). Registers the program itself in
/// `symbols` first if it is not yet there. Throws IrError.
void resolve_program(CoreProgram& program, SymbolTable& symbols);

}  // namespace nonfail
