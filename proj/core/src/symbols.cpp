#include "fexpand/symbols.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

namespace fex {

const char* to_string(SymKind k) {
    switch (k) {
    case SymKind::IndependentVar: return "independent-var";
    case SymKind::DependentVar: return "dependent-var";
    case SymKind::WaveParam: return "wave-param";
    case SymKind::AnsatzCoeff: return "ansatz-coeff";
    case SymKind::Kernel: return "kernel";
    case SymKind::Modulus: return "modulus";
    case SymKind::FreeConstant: return "free-constant";
    }
    return "?";
}

namespace {

struct Entry {
    std::string name;
    SymKind kind;
};

struct Table {
    mutable std::shared_mutex mtx;
    std::deque<Entry> entries; // deque: entries never move, readers keep refs
    std::unordered_map<std::string, std::uint32_t> by_name;
};

Table& table() {
    static Table t;
    return t;
}

} // namespace

const std::string& Sym::name() const {
    auto& t = table();
    std::shared_lock lk(t.mtx);
    return t.entries.at(id).name;
}

SymKind Sym::kind() const {
    auto& t = table();
    std::shared_lock lk(t.mtx);
    return t.entries.at(id).kind;
}

namespace symtab {

Sym intern(const std::string& name, SymKind kind) {
    auto& t = table();
    {
        std::shared_lock lk(t.mtx);
        auto it = t.by_name.find(name);
        if (it != t.by_name.end()) {
            if (t.entries[it->second].kind != kind)
                throw std::invalid_argument("symbol '" + name + "' already interned as " +
                                            std::string(to_string(t.entries[it->second].kind)));
            return Sym{it->second};
        }
    }
    std::unique_lock lk(t.mtx);
    auto it = t.by_name.find(name);
    if (it != t.by_name.end()) {
        if (t.entries[it->second].kind != kind)
            throw std::invalid_argument("symbol '" + name + "' already interned with another kind");
        return Sym{it->second};
    }
    auto id = static_cast<std::uint32_t>(t.entries.size());
    t.entries.push_back({name, kind});
    t.by_name.emplace(name, id);
    return Sym{id};
}

Sym fresh(const std::string& prefix, SymKind kind) {
    auto& t = table();
    std::unique_lock lk(t.mtx);
    std::string name = prefix;
    for (int i = 0; t.by_name.count(name); ++i)
        name = prefix + "_" + std::to_string(i);
    auto id = static_cast<std::uint32_t>(t.entries.size());
    t.entries.push_back({name, kind});
    t.by_name.emplace(name, id);
    return Sym{id};
}

std::optional<Sym> find(const std::string& name) {
    auto& t = table();
    std::shared_lock lk(t.mtx);
    auto it = t.by_name.find(name);
    if (it == t.by_name.end()) return std::nullopt;
    return Sym{it->second};
}

bool exists(const std::string& name) {
    auto& t = table();
    std::shared_lock lk(t.mtx);
    return t.by_name.count(name) != 0;
}

std::size_t size() {
    auto& t = table();
    std::shared_lock lk(t.mtx);
    return t.entries.size();
}

} // namespace symtab

} // namespace fex
