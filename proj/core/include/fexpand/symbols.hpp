#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fex {

enum class SymKind : std::uint8_t {
    IndependentVar,
    DependentVar,
    WaveParam,
    AnsatzCoeff,
    Kernel,
    Modulus,
    FreeConstant,
};

const char* to_string(SymKind k);

// Interned symbol. Identity is the interning id; creation order defines the
// canonical symbol order used by every polynomial in the engine.
struct Sym {
    std::uint32_t id = 0;

    auto operator<=>(const Sym&) const = default;

    const std::string& name() const;
    SymKind kind() const;
};

// Global interning table. Concurrent reads are lock-free after creation;
// writes are serialized.
namespace symtab {

// Returns the symbol named `name`, creating it with `kind` if absent.
// Throws std::invalid_argument if it exists with a different kind.
Sym intern(const std::string& name, SymKind kind);

// Returns a symbol with a fresh, unused name derived from `prefix`.
Sym fresh(const std::string& prefix, SymKind kind);

// Existing symbol by name, if any (regardless of kind).
std::optional<Sym> find(const std::string& name);

bool exists(const std::string& name);
std::size_t size();

} // namespace symtab

} // namespace fex
