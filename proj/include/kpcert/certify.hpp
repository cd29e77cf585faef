#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "kpcert/backend.hpp"
#include "kpcert/cyclic.hpp"
#include "kpcert/metric.hpp"

namespace kpcert {

/// psi(eps) = c * eps^p, the comparison function weighting the correction term.
struct PsiSpec {
    double p = 1.0;
    double c = 1.0;

    /// Throws ParameterError unless p > 0 and c > 0 (both finite).
    void validate() const;
    double operator()(double eps) const noexcept;

    bool operator==(const PsiSpec&) const = default;
};

/// The constants of the Kannan-Pata inequality family:
///   d(Tx,Ty) <= (1-eps)/2 [d(x,Tx) + d(y,Ty)]
///               + Lambda eps^alpha psi(eps) [1 + |x| + |Tx| + |y| + |Ty|]^beta.
struct PataParams {
    double Lambda = 0.0;
    double alpha = 1.0;
    double beta = 0.0;
    PsiSpec psi{};

    /// Throws ParameterError unless Lambda >= 0, alpha >= 1, beta >= 0 and psi is valid.
    void validate() const;

    bool operator==(const PataParams&) const = default;
};

/// Sorted sample of [0, 1] containing both endpoints. The "for every eps"
/// quantifier is checked exactly on these points.
class EpsilonGrid {
public:
    /// `points` evenly spaced values k/(points-1); points >= 2.
    static EpsilonGrid uniform(std::size_t points);
    /// Throws ParameterError unless values are strictly increasing, start at 0,
    /// end at 1 and number at least two.
    static EpsilonGrid from_values(std::vector<double> values);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool operator==(const EpsilonGrid&) const = default;

private:
    explicit EpsilonGrid(std::vector<double> values) : values_(std::move(values)) {}
    std::vector<double> values_;
};

inline constexpr std::size_t kDefaultGridPoints = 101;

enum class Condition {
    kannan,               // d(Tx,Ty) <= lambda/2 [d(x,Tx) + d(y,Ty)], all pairs
    cyclic_kannan,        // same over consecutive pairs of a cyclic representation
    cyclic_kannan_pata,   // the Kannan-Pata family over consecutive pairs
    chakraborty_samanta,  // the Kannan-Pata family over all pairs
    pata_banach,          // d(Tx,Ty) <= (1-eps) d(x,y) + Lambda eps^alpha psi(eps) [1+|x|+|y|]^beta
};

/// CLI tags: kannan, cyclic-kannan, ck-pata, cs, pata.
std::string_view to_string(Condition condition) noexcept;
std::optional<Condition> condition_from_string(std::string_view tag) noexcept;

/// The worst check. For Kannan-type conditions eps fields are empty and rhs is
/// the lambda = 1 boundary, (d(x,Tx) + d(y,Ty)) / 2.
struct Witness {
    PointIndex x;
    PointIndex y;
    std::optional<std::size_t> set;
    std::optional<std::size_t> eps_index;
    std::optional<double> eps;
    double lhs;
    double rhs;

    bool operator==(const Witness&) const = default;
};

struct Certificate {
    bool holds = false;
    Condition condition = Condition::kannan;
    std::size_t pairs_checked = 0;
    std::size_t eps_checked = 0;
    double min_slack = 0.0;
    double tolerance = 0.0;
    std::optional<Witness> witness;
    std::optional<double> lambda_min;

    bool operator==(const Certificate&) const = default;
};

struct CertifyOptions {
    /// Absolute slack tolerance; default_certificate_tolerance when empty.
    std::optional<double> tolerance;
    Backend backend = Backend::parallel;
};

/// 1e-12 * (1 + max distance).
double default_certificate_tolerance(const FiniteMetricSpace& space) noexcept;

/// (1-eps)/2 and Lambda eps^alpha psi(eps): the two weights of the right-hand
/// side at one grid value. Shared by every evaluation path so they round alike.
struct RhsWeights {
    double kannan;
    double correction;
};
RhsWeights kannan_pata_weights(double eps, const PataParams& params) noexcept;

/// Right-hand side of the Kannan-Pata inequality at (x, y, eps).
/// Throws ParameterError for eps outside [0, 1].
double rhs_cyclic(PointIndex x, PointIndex y, double eps, const PataParams& params,
                  const AnchoredSpace& anchored, const SelfMap& map);

/// Exhaustive check of the Kannan-Pata family over consecutive_pairs(rep) and
/// the grid. Throws PreconditionError when validate_cyclic fails.
Certificate certify_cyclic_kannan_pata(const AnchoredSpace& anchored, const SelfMap& map,
                                       const CyclicRepresentation& rep, const PataParams& params,
                                       const EpsilonGrid& grid, const CertifyOptions& options = {});

/// Smallest Kannan constant over all ordered pairs; holds iff it is < 1 and no
/// pair of distinct fixed points exists.
Certificate certify_kannan(const FiniteMetricSpace& space, const SelfMap& map,
                           const CertifyOptions& options = {});

/// certify_kannan restricted to consecutive pairs.
Certificate certify_cyclic_kannan(const FiniteMetricSpace& space, const SelfMap& map,
                                  const CyclicRepresentation& rep,
                                  const CertifyOptions& options = {});

/// The Kannan-Pata family over all ordered pairs: certify_cyclic_kannan_pata
/// with the single-set cover.
Certificate certify_chakraborty_samanta(const AnchoredSpace& anchored, const SelfMap& map,
                                        const PataParams& params, const EpsilonGrid& grid,
                                        const CertifyOptions& options = {});

/// Pata's condition over all ordered pairs. Throws ParameterError if beta > alpha.
Certificate certify_pata_banach(const AnchoredSpace& anchored, const SelfMap& map,
                                const PataParams& params, const EpsilonGrid& grid,
                                const CertifyOptions& options = {});

/// Lambda = 1/(1-lambda), alpha = beta = 1, psi(eps) = eps. A map that is
/// (cyclic) Kannan with constant lambda satisfies the (cyclic) Kannan-Pata
/// family with these parameters for every eps in [0, 1] and every anchor.
/// Throws ParameterError unless 0 < lambda < 1.
PataParams kannan_to_pata(double lambda);

/// kannan_to_pata for a measured lambda_min, which may be 0 (constant maps);
/// values below kMinReductionLambda are raised to it.
inline constexpr double kMinReductionLambda = 1e-9;
PataParams reduction_params(double lambda_min);

}  // namespace kpcert
