#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "kpcert/instance.hpp"

namespace kpcert {

/// SplitMix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// xoshiro256** 1.0 (Blackman & Vigna), state seeded from four SplitMix64
/// outputs. The algorithm is fixed so seeds reproduce across platforms and
/// languages:
///   uniform01()  = (next() >> 11) * 2^-53
///   below(k)     = next() % k, rejecting draws below (2^64 - k) % k
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) noexcept;

    std::uint64_t next() noexcept;
    double uniform01() noexcept;
    std::uint64_t below(std::uint64_t bound) noexcept;
    bool bernoulli(double p) noexcept { return uniform01() < p; }

private:
    std::array<std::uint64_t, 4> s_;
};

enum class EmbedMethod { euclidean_embed, random_repair };

std::string_view to_string(EmbedMethod method) noexcept;

struct GenConfig {
    std::size_t n_points = 5;
    std::size_t m_sets = 2;
    EmbedMethod method = EmbedMethod::euclidean_embed;
    std::size_t embed_dim = 2;
    std::uint64_t seed = 0;
    double overlap_fraction = 0.5;
    /// Probability that a point's image is the admissible target nearest the
    /// hub (a point placed in every set when one exists). 0 samples images
    /// uniformly; larger values make contractive maps common.
    double hub_bias = 0.0;

    /// Throws ParameterError unless n_points >= m_sets >= 1, embed_dim >= 1 and
    /// both probabilities lie in [0, 1].
    void validate() const;

    bool operator==(const GenConfig&) const = default;
};

/// euclidean_embed: uniform points in [0,1)^dim with Euclidean distances.
/// random_repair: symmetric weights in (0,1] closed under shortest paths.
/// Coincident samples are redrawn a bounded number of times.
FiniteMetricSpace random_finite_space(const GenConfig& cfg);

/// A space with a cover and a map for which validate_cyclic passes by
/// construction. The anchor is point 0 and no parameters or grid are set.
Instance random_cyclic_instance(const GenConfig& cfg);

/// Seed of the k-th instance drawn from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) noexcept;

/// max over x != y of d(Tx,Ty) / d(x,y); 0 for a single point.
double lipschitz_constant(const FiniteMetricSpace& space, const SelfMap& map);

struct Classification {
    bool kannan = false;
    bool cyclic_kannan = false;
    bool banach = false;
    bool cyclic_kannan_pata = false;  // with reduction_params(cyclic lambda_min)
    double lambda_min = 0.0;
    double cyclic_lambda_min = 0.0;
    double lipschitz = 0.0;
};

/// Instance must carry a cover.
Classification classify(const Instance& instance, const EpsilonGrid& grid);

struct ClassCounts {
    std::size_t generated = 0;
    std::size_t kannan = 0;
    std::size_t cyclic_kannan = 0;
    std::size_t banach = 0;
    std::size_t cyclic_kannan_pata = 0;
    std::size_t kannan_and_banach = 0;
    std::size_t kannan_not_banach = 0;
    std::size_t banach_not_kannan = 0;
    std::size_t neither = 0;

    bool operator==(const ClassCounts&) const = default;
};

struct ClassifiedInstance {
    std::uint64_t seed;
    Instance instance;
    Classification classification;
};

struct SearchResult {
    ClassCounts counts;
    std::vector<ClassifiedInstance> kannan_not_banach;  // first `keep` found
    std::vector<ClassifiedInstance> banach_not_kannan;
};

/// Generates `budget` instances with seeds derive_seed(cfg.seed, k) and
/// classifies each. Throws ParameterError if budget is 0.
SearchResult search_separating_instances(const GenConfig& cfg, std::size_t budget,
                                         std::size_t keep = 5);

}  // namespace kpcert
