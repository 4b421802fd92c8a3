#pragma once

#include "supmax/verdict.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace supmax::suite {

enum class Kind { Smoke, Full };

struct Options {
    Kind kind = Kind::Smoke;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    /// Negative control: every sampler uses the flipped jump size.
    bool inject_bug = false;
};

/// One verdict. `criterion` is 1..8 for the acceptance criteria and 0 for the
/// supplementary invariants.
struct CheckRecord {
    int criterion = 0;
    std::string name;
    Verdict verdict = Verdict::Inconclusive;
    nlohmann::ordered_json detail;
};

inline constexpr int kCriteria = 8;

std::vector<CheckRecord> run_criterion(int criterion, const Options& options);
std::vector<CheckRecord> run_invariants(const Options& options);
std::vector<CheckRecord> run_suite(const Options& options);

/// PASS only if every record passes.
Verdict overall(const std::vector<CheckRecord>& records);

/// One JSON object per line, then a summary line. Contains no timings.
std::string render_jsonl(const std::vector<CheckRecord>& records, const Options& options);

} // namespace supmax::suite
