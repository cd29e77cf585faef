#include "kpcert/generate.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "kpcert/certify.hpp"
#include "kpcert/errors.hpp"

namespace kpcert {

namespace {

constexpr int kMaxSpaceAttempts = 16;

std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

FiniteMetricSpace sample_space(const GenConfig& cfg, Xoshiro256& rng) {
    const std::size_t n = cfg.n_points;
    for (int attempt = 0; attempt < kMaxSpaceAttempts; ++attempt) {
        DistanceMatrix dist(n);
        if (cfg.method == EmbedMethod::euclidean_embed) {
            std::vector<double> coords(n * cfg.embed_dim);
            for (double& c : coords) c = rng.uniform01();
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    double sq = 0.0;
                    for (std::size_t k = 0; k < cfg.embed_dim; ++k) {
                        const double diff = coords[i * cfg.embed_dim + k] - coords[j * cfg.embed_dim + k];
                        sq += diff * diff;
                    }
                    dist(i, j) = dist(j, i) = std::sqrt(sq);
                }
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = 1.0 - rng.uniform01();
            }
            dist = shortest_path_repair(dist);
        }
        if (validate_metric(dist, default_metric_tolerance(dist)).ok()) {
            return FiniteMetricSpace::create(std::move(dist));
        }
    }
    throw std::runtime_error("could not sample " + std::to_string(n) +
                             " distinct points (seed " + std::to_string(cfg.seed) + ")");
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) noexcept {
    for (auto& word : s_) word = splitmix64(seed);
}

std::uint64_t Xoshiro256::next() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256::uniform01() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Xoshiro256::below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = next();
        if (r >= threshold) return r % bound;
    }
}

std::string_view to_string(EmbedMethod method) noexcept {
    return method == EmbedMethod::euclidean_embed ? "euclidean_embed" : "random_repair";
}

void GenConfig::validate() const {
    if (m_sets < 1) throw ParameterError("m_sets must be at least 1");
    if (n_points < m_sets) throw ParameterError("n_points must be at least m_sets");
    if (embed_dim < 1) throw ParameterError("embed_dim must be at least 1");
    if (!(overlap_fraction >= 0.0 && overlap_fraction <= 1.0)) {
        throw ParameterError("overlap_fraction must lie in [0, 1]");
    }
    if (!(hub_bias >= 0.0 && hub_bias <= 1.0)) throw ParameterError("hub_bias must lie in [0, 1]");
}

FiniteMetricSpace random_finite_space(const GenConfig& cfg) {
    cfg.validate();
    Xoshiro256 rng(cfg.seed);
    return sample_space(cfg, rng);
}

Instance random_cyclic_instance(const GenConfig& cfg) {
    cfg.validate();
    Xoshiro256 rng(cfg.seed);
    FiniteMetricSpace space = sample_space(cfg, rng);
    const std::size_t n = cfg.n_points;
    const std::size_t m = cfg.m_sets;

    // Home sets: a random permutation seeds every set, the rest are uniform.
    std::vector<PointIndex> order(n);
    for (PointIndex x = 0; x < n; ++x) order[x] = x;
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    std::vector<std::size_t> home(n);
    for (std::size_t t = 0; t < n; ++t) home[order[t]] = t < m ? t : rng.below(m);

    std::vector<unsigned char> member(n * m, 0);
    auto in = [&](PointIndex x, std::size_t i) -> unsigned char& { return member[x * m + i]; };
    for (PointIndex x = 0; x < n; ++x) in(x, home[x]) = 1;

    if (m > 1) {
        for (PointIndex x = 0; x < n; ++x) {
            if (rng.bernoulli(cfg.overlap_fraction)) {
                const std::size_t extra = (home[x] + 1 + rng.below(m - 1)) % m;
                in(x, extra) = 1;
            }
        }
    }
    std::optional<PointIndex> hub;
    if (m == 1 || rng.bernoulli(cfg.overlap_fraction)) {
        hub = rng.below(n);
        for (std::size_t i = 0; i < m; ++i) in(*hub, i) = 1;
    }

    // T(x) must lie in A_{i+1} for every i with x in A_i.
    auto admissible = [&](PointIndex x, PointIndex y) {
        for (std::size_t i = 0; i < m; ++i) {
            if (in(x, i) && !in(y, next_set(i, m))) return false;
        }
        return true;
    };

    std::vector<PointIndex> image(n);
    for (PointIndex x = 0; x < n; ++x) {
        std::vector<PointIndex> candidates;
        for (PointIndex y = 0; y < n; ++y) {
            if (admissible(x, y)) candidates.push_back(y);
        }
        const bool toward_hub = hub.has_value() && rng.bernoulli(cfg.hub_bias);
        if (candidates.empty()) {
            std::vector<PointIndex> successors;
            for (PointIndex y = 0; y < n; ++y) {
                if (in(y, next_set(home[x], m))) successors.push_back(y);
            }
            image[x] = successors[rng.below(successors.size())];
        } else if (toward_hub) {
            image[x] = *std::min_element(candidates.begin(), candidates.end(),
                                         [&](PointIndex a, PointIndex b) {
                                             return space.distance(a, *hub) < space.distance(b, *hub);
                                         });
        } else {
            image[x] = candidates[rng.below(candidates.size())];
        }
    }

    // Close the memberships under the inclusions; they only grow, so this ends.
    for (bool changed = true; changed;) {
        changed = false;
        for (PointIndex x = 0; x < n; ++x) {
            for (std::size_t i = 0; i < m; ++i) {
                if (in(x, i) && !in(image[x], next_set(i, m))) {
                    in(image[x], next_set(i, m)) = 1;
                    changed = true;
                }
            }
        }
    }

    std::vector<std::vector<PointIndex>> sets(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (PointIndex x = 0; x < n; ++x) {
            if (in(x, i)) sets[i].push_back(x);
        }
    }

    SelfMap map(std::move(image), n);
    CyclicRepresentation rep(std::move(sets), n);
    return Instance{std::move(space), 0, std::move(map), std::move(rep), std::nullopt, std::nullopt};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) noexcept {
    std::uint64_t state = base + k * 0x9e3779b97f4a7c15ULL;
    return splitmix64(state);
}

double lipschitz_constant(const FiniteMetricSpace& space, const SelfMap& map) {
    if (map.size() != space.size()) throw StructuralError("map and space disagree on the point count");
    double worst = 0.0;
    for (PointIndex x = 0; x < space.size(); ++x) {
        for (PointIndex y = 0; y < space.size(); ++y) {
            if (x == y) continue;
            worst = std::max(worst, space.distance(map(x), map(y)) / space.distance(x, y));
        }
    }
    return worst;
}

Classification classify(const Instance& instance, const EpsilonGrid& grid) {
    if (!instance.rep) throw PreconditionError("classification needs a cyclic representation");
    Classification c;
    const Certificate global = certify_kannan(instance.space, instance.map);
    const Certificate cyclic = certify_cyclic_kannan(instance.space, instance.map, *instance.rep);
    c.kannan = global.holds;
    c.cyclic_kannan = cyclic.holds;
    c.lambda_min = *global.lambda_min;
    c.cyclic_lambda_min = *cyclic.lambda_min;
    c.lipschitz = lipschitz_constant(instance.space, instance.map);
    c.banach = c.lipschitz < 1.0;
    if (cyclic.holds) {
        c.cyclic_kannan_pata =
            certify_cyclic_kannan_pata(instance.anchored(), instance.map, *instance.rep,
                                       reduction_params(c.cyclic_lambda_min), grid)
                .holds;
    }
    return c;
}

SearchResult search_separating_instances(const GenConfig& cfg, std::size_t budget, std::size_t keep) {
    cfg.validate();
    if (budget == 0) throw ParameterError("search budget must be at least 1");
    const EpsilonGrid grid = EpsilonGrid::uniform(kDefaultGridPoints);

    std::vector<std::optional<ClassifiedInstance>> found(budget);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t sk = 0; sk < static_cast<std::int64_t>(budget); ++sk) {
        const auto k = static_cast<std::uint64_t>(sk);
        GenConfig local = cfg;
        local.seed = derive_seed(cfg.seed, k);
        Instance inst = random_cyclic_instance(local);
        Classification c = classify(inst, grid);
        found[k] = ClassifiedInstance{local.seed, std::move(inst), c};
    }

    SearchResult result;
    auto& counts = result.counts;
    for (auto& slot : found) {
        const Classification& c = slot->classification;
        ++counts.generated;
        counts.kannan += c.kannan;
        counts.cyclic_kannan += c.cyclic_kannan;
        counts.banach += c.banach;
        counts.cyclic_kannan_pata += c.cyclic_kannan_pata;
        if (c.kannan && c.banach) ++counts.kannan_and_banach;
        if (!c.kannan && !c.banach) ++counts.neither;
        if (c.kannan && !c.banach) {
            ++counts.kannan_not_banach;
            if (result.kannan_not_banach.size() < keep) result.kannan_not_banach.push_back(std::move(*slot));
        } else if (c.banach && !c.kannan) {
            ++counts.banach_not_kannan;
            if (result.banach_not_kannan.size() < keep) result.banach_not_kannan.push_back(std::move(*slot));
        }
    }
    return result;
}

}  // namespace kpcert
