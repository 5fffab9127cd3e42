#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bsa/core.hpp"
#include "bsa/truth_table.hpp"

namespace bsa {

/// Vertex-boundary summary. Edge-biased quantities use the vertex distribution obtained by
/// picking a uniform boundary edge and then one of its endpoints; since both endpoints of a
/// boundary edge are sensitive along it, vertex x gets weight s_f(x) / sum_y s_f(y).
struct BoundaryReport {
    double influence = 0.0;
    double bsa = 0.0;
    /// E[(sqrt(s_f) - bsa)^2], computed directly as a central moment.
    double var_sqrt_sens = 0.0;
    /// Pr[s_f(x) > 0].
    double vertex_boundary_fraction = 0.0;
    std::uint64_t vertex_boundary_size = 0;
    /// Inf^2 / (4 BSA^2); absent for constant f.
    std::optional<double> threshold;
    /// Edge-biased Pr[s_f(x) >= threshold]; absent for constant f.
    std::optional<double> edge_biased_prob;
    bool constant_input = false;
};

BoundaryReport boundary_report(const SensitivityProfile& profile);
BoundaryReport boundary_report(const TruthTable& f);

struct VertexBoundaryCheck {
    double edge_biased_prob = 0.0;
    /// edge_biased_prob - 1/2.
    double margin = 0.0;
    bool pass = false;
};

/// Edge-biased Pr[s_f >= Inf^2 / (4 BSA^2)] >= 1/2. Throws DegenerateError on constant f.
VertexBoundaryCheck vertex_boundary_check(const SensitivityProfile& profile);
VertexBoundaryCheck vertex_boundary_check(const TruthTable& f);

/// Edge-biased Pr[s_f <= T] and its bound sqrt(T) BSA / Inf, for a threshold T >= 0.
struct ThresholdChain {
    double threshold = 0.0;
    double edge_biased_le = 0.0;
    double bound = 0.0;
    bool holds = false;
};
ThresholdChain threshold_chain(const SensitivityProfile& profile, double threshold);

/// Per-Hamming-level counts for drawing the layered cube: level w holds the points with w
/// coordinates equal to -1.
struct LevelCounts {
    int level = 0;
    std::uint64_t plus = 0;
    std::uint64_t minus = 0;
    /// Points on this level with s_f > 0.
    std::uint64_t boundary = 0;
};
std::vector<LevelCounts> level_counts(const TruthTable& f);

} // namespace bsa
