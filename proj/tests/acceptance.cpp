// One PASS/FAIL line per acceptance criterion; exit 0 iff every line passes.

#include "suite.hpp"

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

using namespace supmax;

namespace {

constexpr std::uint64_t kSeed = 7;

const char* kTitles[] = {
    "",
    "constant-target tightness",
    "uniform lower bound",
    "upper-bound compliance",
    "jump-law correctness",
    "discrete construction",
    "Kingman bound for the random walk",
    "divergence of the mean supremum",
    "numerical identities",
    "determinism of verify",
};

// Wall-clock limits in seconds; 0 means none.
constexpr double kLimits[] = {0, 30, 60, 0, 0, 0, 60, 0, 0, 60};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool report(int k, bool ok, double secs, const std::string& note) {
    const bool in_time = kLimits[k] == 0 || secs <= kLimits[k];
    const bool pass = ok && in_time;
    std::printf("CRITERION %d %s: %s (%.1f s%s%s)\n", k, kTitles[k], pass ? "PASS" : "FAIL", secs,
                in_time ? "" : ", over time limit", note.empty() ? "" : (", " + note).c_str());
    std::fflush(stdout);
    return pass;
}

struct Captured {
    int status = -1;
    std::string out;
};

Captured run_binary(const std::string& args) {
    const std::string cmd = std::string(SUPMAX_BINARY) + " " + args;
    Captured c;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return c;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), got);
    const int raw = ::pclose(pipe);
    c.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return c;
}

} // namespace

int main() {
    suite::Options opts;
    opts.seed = kSeed;
    bool all = true;

    for (int k = 1; k <= suite::kCriteria; ++k) {
        const auto start = std::chrono::steady_clock::now();
        const auto records = suite::run_criterion(k, opts);
        const double secs = seconds_since(start);
        int checks = 0;
        std::vector<std::string> failed;
        for (const auto& r : records) {
            if (r.criterion != k) continue;
            ++checks;
            if (r.verdict != Verdict::Pass) failed.push_back(r.name);
        }
        const bool ok = checks > 0 && failed.empty();
        all &= report(k, ok, secs, std::to_string(checks) + (checks == 1 ? " check" : " checks"));
        for (const auto& name : failed) std::printf("  not passed: %s\n", name.c_str());
    }

    {
        const auto start = std::chrono::steady_clock::now();
        const auto first = run_binary("verify --suite smoke --seed 7");
        const double secs = seconds_since(start);
        const auto second = run_binary("verify --suite smoke --seed 7");
        const auto one = run_binary("verify --suite smoke --seed 7 --threads 1");
        const auto two = run_binary("verify --suite smoke --seed 7 --threads 2");
        const bool exits = first.status == 0 && second.status == 0 && one.status == 0 && two.status == 0;
        const bool same = !first.out.empty() && first.out == second.out && first.out == one.out &&
                          first.out == two.out;
        all &= report(9, exits && same, secs,
                      std::string(exits ? "exit 0" : "nonzero exit") + ", " +
                          (same ? "byte-identical" : "output differs"));
    }

    std::printf("ACCEPTANCE %s\n", all ? "PASS" : "FAIL");
    return all ? 0 : 1;
}
