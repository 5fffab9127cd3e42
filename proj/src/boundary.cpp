#include "bsa/boundary.hpp"

#include <bit>
#include <cmath>

#include "bsa/error.hpp"
#include "bsa/partition.hpp"

namespace bsa {

namespace {

// Sum over the cube of sqrt(s_f), carried at high precision so that s >= T is decided as
// 4 s W^2 >= S^2 without rounding surprises near integer thresholds.
HighFloat sqrt_mass(const SensitivityProfile& profile) {
    HighFloat w = 0;
    for (std::size_t m = 1; m < profile.counts.size(); ++m) {
        w += HighFloat(profile.counts[m]) * sqrt(HighFloat(static_cast<int>(m)));
    }
    return w;
}

// sum_{s >= T} s * counts[s] with T = S^2 / (4 W^2).
std::uint64_t edge_mass_above_threshold(const SensitivityProfile& profile) {
    const HighFloat w = sqrt_mass(profile);
    const HighFloat s_total(profile.total_sensitivity());
    std::uint64_t mass = 0;
    for (std::size_t s = 1; s < profile.counts.size(); ++s) {
        if (4 * HighFloat(static_cast<int>(s)) * w * w >= s_total * s_total) mass += s * profile.counts[s];
    }
    return mass;
}

} // namespace

BoundaryReport boundary_report(const SensitivityProfile& profile) {
    BoundaryReport rep;
    const auto inf = total_influence(profile);
    rep.influence = inf.total;
    rep.bsa = surface_area(profile);

    double central = 0.0;
    for (std::size_t m = 0; m < profile.counts.size(); ++m) {
        const double d = std::sqrt(static_cast<double>(m)) - rep.bsa;
        central += static_cast<double>(profile.counts[m]) * d * d;
    }
    rep.var_sqrt_sens = std::ldexp(central, -profile.n);

    rep.vertex_boundary_size = profile.points() - profile.counts[0];
    rep.vertex_boundary_fraction = std::ldexp(static_cast<double>(rep.vertex_boundary_size), -profile.n);

    const std::uint64_t edges = profile.total_sensitivity();
    if (edges == 0) {
        rep.constant_input = true;
        return rep;
    }
    rep.threshold = rep.influence * rep.influence / (4.0 * rep.bsa * rep.bsa);
    rep.edge_biased_prob = static_cast<double>(edge_mass_above_threshold(profile)) / static_cast<double>(edges);
    return rep;
}

BoundaryReport boundary_report(const TruthTable& f) { return boundary_report(sensitivity_profile(f)); }

VertexBoundaryCheck vertex_boundary_check(const SensitivityProfile& profile) {
    const std::uint64_t edges = profile.total_sensitivity();
    if (edges == 0) throw DegenerateError("vertex-boundary threshold is undefined for a constant function");
    const std::uint64_t mass = edge_mass_above_threshold(profile);
    VertexBoundaryCheck chk;
    chk.edge_biased_prob = static_cast<double>(mass) / static_cast<double>(edges);
    chk.margin = chk.edge_biased_prob - 0.5;
    chk.pass = 2 * mass >= edges;
    return chk;
}

VertexBoundaryCheck vertex_boundary_check(const TruthTable& f) { return vertex_boundary_check(sensitivity_profile(f)); }

ThresholdChain threshold_chain(const SensitivityProfile& profile, double threshold) {
    if (!(threshold >= 0.0)) throw InputError("threshold must be nonnegative");
    const std::uint64_t edges = profile.total_sensitivity();
    if (edges == 0) throw DegenerateError("edge-biased distribution is undefined for a constant function");
    std::uint64_t below = 0;
    for (std::size_t s = 1; s < profile.counts.size(); ++s) {
        if (static_cast<double>(s) <= threshold) below += s * profile.counts[s];
    }
    ThresholdChain chain;
    chain.threshold = threshold;
    chain.edge_biased_le = static_cast<double>(below) / static_cast<double>(edges);
    chain.bound = std::sqrt(threshold) * surface_area(profile) / total_influence(profile).total;
    chain.holds = chain.edge_biased_le <= chain.bound + 1e-12;
    return chain;
}

std::vector<LevelCounts> level_counts(const TruthTable& f) {
    const int n = f.n();
    std::vector<LevelCounts> levels(static_cast<std::size_t>(n) + 1);
    for (int w = 0; w <= n; ++w) levels[static_cast<std::size_t>(w)].level = w;
    for (Point x = 0; x < f.size(); ++x) {
        auto& lvl = levels[static_cast<std::size_t>(std::popcount(x))];
        if (f.bit(x)) {
            ++lvl.minus;
        } else {
            ++lvl.plus;
        }
        for (int i = 0; i < n; ++i) {
            if (f.bit(x ^ (Point{1} << i)) != f.bit(x)) {
                ++lvl.boundary;
                break;
            }
        }
    }
    return levels;
}

} // namespace bsa
