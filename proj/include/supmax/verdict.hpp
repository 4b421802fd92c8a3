#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace supmax {

enum class Verdict { Pass, Fail, Inconclusive };

std::string_view to_string(Verdict v);

/// Fail if any input fails; Pass if at least one passes; else Inconclusive.
Verdict combine(std::span<const Verdict> verdicts);

/// One conditional-moment estimate over a range of states (or one time point).
struct DriftBin {
    double state_low = 0.0;
    double state_high = 0.0;
    std::uint64_t count = 0;
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double target = 0.0;
    double allowance = 0.0;
    Verdict verdict = Verdict::Inconclusive;
};

struct DriftReport {
    std::string target;
    std::vector<DriftBin> bins;
    Verdict overall = Verdict::Inconclusive;

    /// Recomputes `overall` from the bins.
    void finalize();
};

} // namespace supmax
