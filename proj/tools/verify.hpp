#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsa/polynomial.hpp"

namespace bsa::app {

struct VerifyOptions {
    /// Master seed; every randomized corpus derives its substreams from it.
    std::uint64_t seed = 20240601;
    /// Degree constant used by the polylogarithmic ceiling check.
    int k_constant = 1;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool checks_passed = false;
    double seconds = 0.0;
    /// Wall-clock budget in seconds; 0 when the criterion has none.
    double limit_seconds = 0.0;
    std::string detail;

    bool within_limit() const noexcept { return limit_seconds <= 0.0 || seconds <= limit_seconds; }
    bool passed() const noexcept { return checks_passed && within_limit(); }
};

inline constexpr int kCriterionCount = 14;

/// Runs acceptance criterion `id` (1..14); InputError for other ids.
CriterionResult run_criterion(int id, const VerifyOptions& options = {});

/// The PTF corpus shared by the tail-identity, Holder and ceiling checks.
std::vector<GeneratorSpec> ptf_corpus();

} // namespace bsa::app
