#include "supmax/verdict.hpp"

#include <algorithm>

namespace supmax {

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

Verdict combine(std::span<const Verdict> verdicts) {
    if (std::find(verdicts.begin(), verdicts.end(), Verdict::Fail) != verdicts.end())
        return Verdict::Fail;
    if (std::find(verdicts.begin(), verdicts.end(), Verdict::Pass) != verdicts.end())
        return Verdict::Pass;
    return Verdict::Inconclusive;
}

void DriftReport::finalize() {
    std::vector<Verdict> vs;
    vs.reserve(bins.size());
    for (const auto& b : bins) vs.push_back(b.verdict);
    overall = combine(vs);
}

} // namespace supmax
