#pragma once

#include "fexpand/ansatz.hpp"
#include "fexpand/verify.hpp"

#include <string>
#include <vector>

namespace fex {

inline constexpr int kSchemaVersion = 1;

std::vector<SolutionFixture> parse_fixtures(const std::string& json_text);
std::vector<SolutionFixture> load_fixtures(const std::string& path);

std::string corpus_json(const CorpusSummary& s);

std::string reduce_json(const PdeSpec& p, const WaveSub& w, const OdeSpec& o);

std::string balance_json(const PdeSpec& p, const AuxSystem& aux, const AnsatzShape& shape);

// Full solve document: families with assignments, side conditions and the
// assembled closed-form solution strings. Deterministic byte output.
std::string solve_json(const PdeSpec& p, const WaveSub& w, const AuxSystem& aux,
                       const AnsatzShape& shape, const AnsatzInstance& inst,
                       const SolveResult& res);

} // namespace fex
