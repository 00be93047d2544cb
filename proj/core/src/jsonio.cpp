#include "fexpand/jsonio.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fex {

using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<std::string> string_list(const ordered_json& j, const char* key) {
    std::vector<std::string> out;
    if (!j.contains(key)) return out;
    for (auto& e : j.at(key)) out.push_back(e.get<std::string>());
    return out;
}

} // namespace

std::vector<SolutionFixture> parse_fixtures(const std::string& json_text) {
    ordered_json doc = ordered_json::parse(json_text);
    if (doc.is_object() && doc.at("schema_version").get<int>() != kSchemaVersion)
        throw std::invalid_argument("unsupported fixture schema version");
    const ordered_json& list = doc.is_array() ? doc : doc.at("fixtures");
    std::vector<SolutionFixture> out;
    for (auto& j : list) {
        SolutionFixture f;
        f.name = j.value("name", "fixture-" + std::to_string(out.size()));
        f.equation = j.at("equation").get<std::string>();
        f.equation_params = string_list(j, "equation_params");
        f.solution = j.at("solution").get<std::string>();
        f.params = string_list(j, "params");
        f.relations = string_list(j, "relations");
        f.expect = j.value("expect", "zero");
        if (f.expect != "zero" && f.expect != "nonzero")
            throw std::invalid_argument("fixture " + f.name + ": expect must be zero|nonzero");
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<SolutionFixture> load_fixtures(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open fixture file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_fixtures(ss.str());
}

std::string corpus_json(const CorpusSummary& s) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["fixtures"] = ordered_json::array();
    for (auto& o : s.outcomes) {
        ordered_json j;
        j["name"] = o.name;
        j["verdict"] = o.error.empty() ? (o.zero ? "zero" : "nonzero") : "error";
        j["as_expected"] = o.as_expected;
        if (!o.residual.empty()) j["residual"] = o.residual;
        if (!o.error.empty()) j["error"] = o.error;
        doc["fixtures"].push_back(std::move(j));
    }
    doc["zero_count"] = s.zero_count;
    doc["mismatches"] = s.mismatches;
    doc["total"] = s.outcomes.size();
    return doc.dump(2) + "\n";
}

std::string reduce_json(const PdeSpec& p, const WaveSub& w, const OdeSpec& o) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["equation"] = print_pde(p);
    ordered_json wave;
    for (std::size_t i = 0; i < p.independents.size(); ++i)
        wave[p.independents[i].name()] = w.wave_params[i].name();
    doc["wave_params"] = std::move(wave);
    doc["wave_variable"] = w.wave_var.name();
    doc["ode"] = to_string(o.lhs) + " = 0";
    return doc.dump(2) + "\n";
}

std::string balance_json(const PdeSpec& p, const AuxSystem& aux, const AnsatzShape& shape) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["equation"] = print_pde(p);
    doc["aux"] = aux.name();
    doc["arity"] = shape.arity;
    ordered_json blocks;
    for (auto& [mask, orders] : shape.orders)
        blocks[block_prefix(shape.arity, mask)] = orders;
    doc["orders"] = std::move(blocks);
    return doc.dump(2) + "\n";
}

std::string solve_json(const PdeSpec& p, const WaveSub& w, const AuxSystem& aux,
                       const AnsatzShape& shape, const AnsatzInstance& inst,
                       const SolveResult& res) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["equation"] = print_pde(p);
    doc["aux"] = aux.name();
    doc["arity"] = shape.arity;
    ordered_json blocks;
    for (auto& [mask, orders] : shape.orders)
        blocks[block_prefix(shape.arity, mask)] = orders;
    doc["orders"] = std::move(blocks);
    doc["ansatz"] = to_string(inst.body);
    doc["complete"] = res.complete;
    doc["budget_hit"] = res.budget_hit;

    doc["families"] = ordered_json::array();
    for (auto& fam : res.families) {
        ordered_json j;
        ordered_json assign;
        for (auto& [s, v] : fam.assignment) assign[s.name()] = v.str();
        j["assignment"] = std::move(assign);
        ordered_json free_list = ordered_json::array();
        for (Sym s : fam.free_syms) free_list.push_back(s.name());
        j["free"] = std::move(free_list);
        ordered_json side = ordered_json::array();
        for (auto& c : fam.side_conditions) side.push_back(c.str() + " != 0");
        j["side_conditions"] = std::move(side);
        ClosedFormSolution sol = family_to_solution(fam, inst, aux, w, p);
        j["solution"] = to_string(sol.expression);
        doc["families"].push_back(std::move(j));
    }

    doc["notes"] = res.notes;
    return doc.dump(2) + "\n";
}

} // namespace fex
