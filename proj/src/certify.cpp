#include "kpcert/certify.hpp"

#include <cmath>
#include <string>

#include "kpcert/errors.hpp"
#include "kpcert/kernels.hpp"

namespace kpcert {

namespace {

bool finite_at_least(double v, double lo) { return std::isfinite(v) && v >= lo; }

std::string fmt(double v) { return std::to_string(v); }

double resolve_tolerance(const FiniteMetricSpace& space, const CertifyOptions& options) {
    const double tol = options.tolerance.value_or(default_certificate_tolerance(space));
    if (!finite_at_least(tol, 0.0)) {
        throw ParameterError("certificate tolerance must be finite and non-negative");
    }
    return tol;
}

void require_same_points(const FiniteMetricSpace& space, const SelfMap& map) {
    if (map.size() != space.size()) {
        throw StructuralError("map has " + std::to_string(map.size()) + " entries for a space of " +
                              std::to_string(space.size()) + " points");
    }
}

void require_valid_cover(const FiniteMetricSpace& space, const SelfMap& map,
                         const CyclicRepresentation& rep) {
    require_same_points(space, map);
    if (!validate_cyclic(rep, map).ok()) {
        throw PreconditionError("not a cyclic representation with respect to the map");
    }
}

kernels::PointTable table(const FiniteMetricSpace& space, const SelfMap& map,
                          std::span<const double> norms) {
    return {space.size(), space.matrix().data(), map.image(), norms};
}

Certificate slack_certificate(Condition condition, const AnchoredSpace& anchored, const SelfMap& map,
                              std::span<const ConsecutivePair> pairs, const PataParams& params,
                              const EpsilonGrid& grid, kernels::RhsForm form, bool report_set,
                              const CertifyOptions& options) {
    params.validate();
    const FiniteMetricSpace& space = anchored.space();
    const double tolerance = resolve_tolerance(space, options);

    const std::vector<double> norms = anchored.norms();
    std::vector<double> first(grid.size());
    std::vector<double> correction(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const RhsWeights w = kannan_pata_weights(grid.values()[g], params);
        // Pata's condition weights d(x,y) by (1-eps), not (1-eps)/2.
        first[g] = form == kernels::RhsForm::pata_banach ? 1.0 - grid.values()[g] : w.kannan;
        correction[g] = w.correction;
    }

    const kernels::SlackProblem problem{table(space, map, norms), pairs, first, correction,
                                        params.beta, form};
    const kernels::SlackMin worst = options.backend == Backend::parallel
                                        ? kernels::parallel::min_slack(problem)
                                        : kernels::reference::min_slack(problem);

    Certificate cert;
    cert.condition = condition;
    cert.pairs_checked = pairs.size();
    cert.eps_checked = grid.size();
    cert.tolerance = tolerance;
    cert.min_slack = worst.slack;
    cert.holds = worst.slack >= -tolerance;
    if (!cert.holds) {
        const std::size_t p = worst.check / grid.size();
        const std::size_t g = worst.check % grid.size();
        const auto [x, y, set] = pairs[p];
        const auto& t = problem.points;
        const double rhs = kernels::combine_rhs(
            first[g], kernels::first_term(t, x, y, form), correction[g],
            std::pow(kernels::correction_base(t, x, y, form), params.beta));
        Witness w{x, y, std::nullopt, g, grid.values()[g], t.d(map(x), map(y)), rhs};
        if (report_set) w.set = set;
        cert.witness = w;
    }
    return cert;
}

Certificate kannan_certificate(Condition condition, const FiniteMetricSpace& space,
                               const SelfMap& map, std::span<const ConsecutivePair> pairs,
                               const CertifyOptions& options) {
    const double tolerance = resolve_tolerance(space, options);
    const kernels::PointTable t = table(space, map, {});
    const kernels::KannanScan scan = options.backend == Backend::parallel
                                         ? kernels::parallel::kannan_scan(t, pairs)
                                         : kernels::reference::kannan_scan(t, pairs);

    Certificate cert;
    cert.condition = condition;
    cert.pairs_checked = pairs.size();
    cert.eps_checked = 0;
    cert.tolerance = tolerance;
    cert.min_slack = scan.min_slack;
    cert.lambda_min = scan.max_ratio;
    cert.holds = scan.zero_failure == kernels::npos && scan.max_ratio < 1.0;
    if (!cert.holds) {
        const std::size_t p = scan.zero_failure != kernels::npos ? scan.zero_failure : scan.ratio_pair;
        const auto [x, y, set] = pairs[p];
        const double s = t.d(x, map(x)) + t.d(y, map(y));
        cert.witness = Witness{x, y, set, std::nullopt, std::nullopt, t.d(map(x), map(y)), 0.5 * s};
    }
    return cert;
}

}  // namespace

void PsiSpec::validate() const {
    if (!(std::isfinite(p) && p > 0.0)) throw ParameterError("psi exponent p must be > 0, got " + fmt(p));
    if (!(std::isfinite(c) && c > 0.0)) throw ParameterError("psi scale c must be > 0, got " + fmt(c));
}

double PsiSpec::operator()(double eps) const noexcept { return c * std::pow(eps, p); }

void PataParams::validate() const {
    if (!finite_at_least(Lambda, 0.0)) throw ParameterError("Lambda must be >= 0, got " + fmt(Lambda));
    if (!finite_at_least(alpha, 1.0)) throw ParameterError("alpha must be >= 1, got " + fmt(alpha));
    if (!finite_at_least(beta, 0.0)) throw ParameterError("beta must be >= 0, got " + fmt(beta));
    psi.validate();
}

EpsilonGrid EpsilonGrid::uniform(std::size_t points) {
    if (points < 2) throw ParameterError("an epsilon grid needs at least 2 points");
    std::vector<double> values(points);
    const double last = static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) values[k] = static_cast<double>(k) / last;
    return EpsilonGrid(std::move(values));
}

EpsilonGrid EpsilonGrid::from_values(std::vector<double> values) {
    if (values.size() < 2) throw ParameterError("an epsilon grid needs at least 2 points");
    if (values.front() != 0.0 || values.back() != 1.0) {
        throw ParameterError("an epsilon grid must start at 0 and end at 1");
    }
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (!(values[k] > values[k - 1])) {
            throw ParameterError("epsilon grid values must be strictly increasing (index " +
                                 std::to_string(k) + ")");
        }
    }
    return EpsilonGrid(std::move(values));
}

std::string_view to_string(Condition condition) noexcept {
    switch (condition) {
        case Condition::kannan: return "kannan";
        case Condition::cyclic_kannan: return "cyclic-kannan";
        case Condition::cyclic_kannan_pata: return "ck-pata";
        case Condition::chakraborty_samanta: return "cs";
        case Condition::pata_banach: return "pata";
    }
    return "unknown";
}

std::optional<Condition> condition_from_string(std::string_view tag) noexcept {
    for (Condition c : {Condition::kannan, Condition::cyclic_kannan, Condition::cyclic_kannan_pata,
                        Condition::chakraborty_samanta, Condition::pata_banach}) {
        if (to_string(c) == tag) return c;
    }
    return std::nullopt;
}

double default_certificate_tolerance(const FiniteMetricSpace& space) noexcept {
    return 1e-12 * (1.0 + space.max_distance());
}

RhsWeights kannan_pata_weights(double eps, const PataParams& params) noexcept {
    return {(1.0 - eps) / 2.0, params.Lambda * std::pow(eps, params.alpha) * params.psi(eps)};
}

double rhs_cyclic(PointIndex x, PointIndex y, double eps, const PataParams& params,
                  const AnchoredSpace& anchored, const SelfMap& map) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw ParameterError("eps must lie in [0, 1], got " + fmt(eps));
    params.validate();
    const FiniteMetricSpace& space = anchored.space();
    require_same_points(space, map);
    if (x >= space.size() || y >= space.size()) throw StructuralError("point index out of range");

    const std::vector<double> norms = anchored.norms();
    const kernels::PointTable t = table(space, map, norms);
    const RhsWeights w = kannan_pata_weights(eps, params);
    const auto form = kernels::RhsForm::kannan_pata;
    return kernels::combine_rhs(w.kannan, kernels::first_term(t, x, y, form), w.correction,
                                std::pow(kernels::correction_base(t, x, y, form), params.beta));
}

Certificate certify_cyclic_kannan_pata(const AnchoredSpace& anchored, const SelfMap& map,
                                       const CyclicRepresentation& rep, const PataParams& params,
                                       const EpsilonGrid& grid, const CertifyOptions& options) {
    require_valid_cover(anchored.space(), map, rep);
    const auto pairs = consecutive_pairs(rep);
    return slack_certificate(Condition::cyclic_kannan_pata, anchored, map, pairs, params, grid,
                             kernels::RhsForm::kannan_pata, true, options);
}

Certificate certify_chakraborty_samanta(const AnchoredSpace& anchored, const SelfMap& map,
                                        const PataParams& params, const EpsilonGrid& grid,
                                        const CertifyOptions& options) {
    require_same_points(anchored.space(), map);
    const auto pairs = consecutive_pairs(CyclicRepresentation::whole(map.size()));
    return slack_certificate(Condition::chakraborty_samanta, anchored, map, pairs, params, grid,
                             kernels::RhsForm::kannan_pata, true, options);
}

Certificate certify_pata_banach(const AnchoredSpace& anchored, const SelfMap& map,
                                const PataParams& params, const EpsilonGrid& grid,
                                const CertifyOptions& options) {
    params.validate();
    if (params.beta > params.alpha) {
        throw ParameterError("Pata's condition needs beta in [0, alpha]; got beta = " +
                             fmt(params.beta) + ", alpha = " + fmt(params.alpha));
    }
    require_same_points(anchored.space(), map);
    const auto pairs = consecutive_pairs(CyclicRepresentation::whole(map.size()));
    return slack_certificate(Condition::pata_banach, anchored, map, pairs, params, grid,
                             kernels::RhsForm::pata_banach, false, options);
}

Certificate certify_kannan(const FiniteMetricSpace& space, const SelfMap& map,
                           const CertifyOptions& options) {
    require_same_points(space, map);
    const auto pairs = consecutive_pairs(CyclicRepresentation::whole(map.size()));
    return kannan_certificate(Condition::kannan, space, map, pairs, options);
}

Certificate certify_cyclic_kannan(const FiniteMetricSpace& space, const SelfMap& map,
                                  const CyclicRepresentation& rep, const CertifyOptions& options) {
    require_valid_cover(space, map, rep);
    const auto pairs = consecutive_pairs(rep);
    return kannan_certificate(Condition::cyclic_kannan, space, map, pairs, options);
}

PataParams kannan_to_pata(double lambda) {
    if (!(std::isfinite(lambda) && lambda > 0.0 && lambda < 1.0)) {
        throw ParameterError("Kannan constant must lie in (0, 1), got " + fmt(lambda));
    }
    return PataParams{1.0 / (1.0 - lambda), 1.0, 1.0, PsiSpec{1.0, 1.0}};
}

PataParams reduction_params(double lambda_min) {
    return kannan_to_pata(lambda_min < kMinReductionLambda ? kMinReductionLambda : lambda_min);
}

}  // namespace kpcert
