#include <cmath>

#include <gtest/gtest.h>

#include "kpcert/certify.hpp"
#include "kpcert/generate.hpp"
#include "kpcert/kernels.hpp"

namespace kpcert::kernels {
namespace {

Instance generated(std::uint64_t seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.n_points = 1 + seed % 24;
    cfg.m_sets = 1 + seed % std::min<std::size_t>(4, cfg.n_points);
    cfg.hub_bias = 0.5;
    cfg.method = seed % 3 == 0 ? EmbedMethod::random_repair : EmbedMethod::euclidean_embed;
    return random_cyclic_instance(cfg);
}

TEST(Kernels, SlackMinimumIdenticalAcrossBackends) {
    const auto grid = EpsilonGrid::uniform(257);
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        const Instance inst = generated(seed);
        const auto norms = inst.anchored().norms();
        const auto pairs = consecutive_pairs(*inst.rep);
        const PataParams params{0.5 + static_cast<double>(seed % 5), 1.0 + static_cast<double>(seed % 2),
                                static_cast<double>(seed % 3) * 0.5, PsiSpec{1.0, 1.0}};
        std::vector<double> first;
        std::vector<double> correction;
        for (double eps : grid.values()) {
            const auto w = kannan_pata_weights(eps, params);
            first.push_back(w.kannan);
            correction.push_back(w.correction);
        }
        for (RhsForm form : {RhsForm::kannan_pata, RhsForm::pata_banach}) {
            const SlackProblem problem{{inst.space.size(), inst.space.matrix().data(), inst.map.image(), norms},
                                       pairs, first, correction, params.beta, form};
            const SlackMin ref = reference::min_slack(problem);
            const SlackMin par = parallel::min_slack(problem);
            EXPECT_EQ(ref, par) << "seed " << seed;
            EXPECT_NE(ref.check, npos);
        }
    }
}

TEST(Kernels, KannanScanIdenticalAcrossBackends) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Instance inst = generated(seed);
        const PointTable t{inst.space.size(), inst.space.matrix().data(), inst.map.image(), {}};
        for (const auto& rep : {*inst.rep, CyclicRepresentation::whole(inst.space.size())}) {
            const auto pairs = consecutive_pairs(rep);
            EXPECT_EQ(reference::kannan_scan(t, pairs), parallel::kannan_scan(t, pairs)) << "seed " << seed;
        }
    }
}

TEST(Kernels, EmptyInputsYieldNeutralResults) {
    const PointTable t{};
    EXPECT_EQ(parallel::kannan_scan(t, {}), KannanScan{});
    EXPECT_EQ(parallel::min_slack(SlackProblem{}), SlackMin{});
    EXPECT_EQ(reference::min_slack(SlackProblem{}), SlackMin{});
}

TEST(Kernels, TriangleScanIdenticalAcrossBackends) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Xoshiro256 rng(seed);
        const std::size_t n = 2 + rng.below(20);
        DistanceMatrix d(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = 1.0 - rng.uniform01();
        }
        EXPECT_EQ(reference::triangle_violations(d, 0.0), parallel::triangle_violations(d, 0.0));
        EXPECT_EQ(reference::triangle_violations(d, 0.1), parallel::triangle_violations(d, 0.1));
        EXPECT_EQ(validate_metric(d, 0.0, Backend::reference).violations,
                  validate_metric(d, 0.0, Backend::parallel).violations);
    }
}

TEST(Kernels, ShortestPathSweepIdenticalAcrossBackends) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Xoshiro256 rng(seed + 1000);
        const std::size_t n = 2 + rng.below(30);
        DistanceMatrix d(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = 1.0 - rng.uniform01();
        }
        DistanceMatrix a = d;
        DistanceMatrix b = d;
        bool ca = true;
        bool cb = true;
        while (ca || cb) {
            ca = reference::relax_shortest_paths(a);
            cb = parallel::relax_shortest_paths(b);
            ASSERT_EQ(ca, cb);
            ASSERT_EQ(a, b) << "seed " << seed;
        }
        EXPECT_EQ(shortest_path_repair(d, Backend::reference), shortest_path_repair(d, Backend::parallel));
    }
}

}  // namespace
}  // namespace kpcert::kernels
