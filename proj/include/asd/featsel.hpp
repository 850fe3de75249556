#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asd/tabular.hpp"

namespace asd {

enum class RankMethod { InfoGain, ChiSquared, Correlation, OneR, ReliefF };

inline constexpr RankMethod kAllRankMethods[] = {RankMethod::InfoGain, RankMethod::ChiSquared,
                                                 RankMethod::Correlation, RankMethod::OneR,
                                                 RankMethod::ReliefF};

std::string rank_method_name(RankMethod m);
std::optional<RankMethod> rank_method_from_name(std::string_view name);

struct RankedAttribute {
    std::string attribute;
    double score = 0.0;

    bool operator==(const RankedAttribute&) const = default;
};

// Every non-class attribute exactly once, sorted by score descending with
// ties broken by schema order.
struct FeatureRanking {
    RankMethod method = RankMethod::InfoGain;
    std::vector<RankedAttribute> entries;
};

// Numeric attributes are discretized into 10 equal-width bins over their
// observed range for the frequency-based rankers below. Constant
// attributes score 0 under every method except OneR, where they fall back
// to the majority-class fraction.
FeatureRanking rank_info_gain(const Dataset& d);
// Association strength; 0 when the attribute or the class is constant.
FeatureRanking rank_chi_squared(const Dataset& d);
// |r| of the integer-coded attribute against the 0/1 class; 0 when either
// side is constant.
FeatureRanking rank_correlation(const Dataset& d);
// Training accuracy of the best one-attribute rule; ties pick class "no".
FeatureRanking rank_one_r(const Dataset& d);

struct ReliefFConfig {
    std::size_t neighbors = 10;   // k nearest hits and misses
    std::size_t samples = 0;      // 0 = every record, deterministically
    std::uint64_t seed = 0;       // used only when samples < record count
};

// Instance-based attribute weights: per sampled record, the k nearest
// same-class and other-class records shift each attribute's weight by its
// diff (nominal: inequality, numeric: range-normalized absolute
// difference). Distance ties are broken by comparing diff vectors, keeping
// the result independent of record order.
FeatureRanking rank_relief_f(const Dataset& d, const ReliefFConfig& config = {});

// Dispatch with default configurations.
FeatureRanking rank(const Dataset& d, RankMethod m);

// First k attribute names of a ranking, rank order preserved.
std::vector<std::string> top_k(const FeatureRanking& ranking, std::size_t k);

// CSV rows (method, rank, attribute, score) for one or more rankings.
std::string rankings_csv(const std::vector<FeatureRanking>& rankings);

}  // namespace asd
