#include "kpcert/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

#include <openssl/evp.h>

namespace kpcert::io {

namespace {

const Json& require(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw FormatError(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw FormatError(where, std::string("missing key \"") + key + "\"");
    return *it;
}

double number_at(const Json& j, const std::string& where) {
    if (!j.is_number()) throw FormatError(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw FormatError(where, "expected a finite number");
    return v;
}

std::size_t index_at(const Json& j, const std::string& where) {
    if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
        throw FormatError(where, "expected a non-negative integer");
    }
    return j.get<std::size_t>();
}

std::vector<std::size_t> index_list(const Json& j, const std::string& where) {
    if (!j.is_array()) throw FormatError(where, "expected an array of indices");
    std::vector<std::size_t> out;
    out.reserve(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(index_at(j[k], where + "/" + std::to_string(k)));
    return out;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

}  // namespace

PataParams pata_from_json(const Json& j, const std::string& where) {
    PataParams p;
    p.Lambda = number_at(require(j, "Lambda", where), where + "/Lambda");
    p.alpha = number_at(require(j, "alpha", where), where + "/alpha");
    p.beta = number_at(require(j, "beta", where), where + "/beta");
    const Json& psi = require(j, "psi", where);
    const std::string psi_where = where + "/psi";
    const Json& kind = require(psi, "kind", psi_where);
    if (!kind.is_string() || kind.get<std::string>() != "power") {
        throw FormatError(psi_where + "/kind", "only \"power\" is supported");
    }
    p.psi.p = number_at(require(psi, "p", psi_where), psi_where + "/p");
    p.psi.c = number_at(require(psi, "c", psi_where), psi_where + "/c");
    p.validate();
    return p;
}

EpsilonGrid grid_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) throw FormatError(where, "expected an object");
    if (j.contains("points")) return EpsilonGrid::uniform(index_at(j["points"], where + "/points"));
    if (j.contains("values")) {
        const Json& arr = j["values"];
        if (!arr.is_array()) throw FormatError(where + "/values", "expected an array");
        std::vector<double> values;
        for (std::size_t k = 0; k < arr.size(); ++k) {
            values.push_back(number_at(arr[k], where + "/values/" + std::to_string(k)));
        }
        return EpsilonGrid::from_values(std::move(values));
    }
    throw FormatError(where, "expected \"points\" or \"values\"");
}

InstanceFile parse_instance_file(const Json& doc) {
    if (!doc.is_object()) throw FormatError("", "instance must be a JSON object");
    InstanceFile file;

    const Json& points = require(doc, "points", "");
    if (!points.is_array()) throw FormatError("/points", "expected an array of strings");
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (!points[k].is_string()) throw FormatError("/points/" + std::to_string(k), "expected a string");
        file.points.push_back(points[k].get<std::string>());
    }

    const Json& dist = require(doc, "dist", "");
    if (!dist.is_array()) throw FormatError("/dist", "expected an array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const std::string row_where = "/dist/" + std::to_string(i);
        if (!dist[i].is_array()) throw FormatError(row_where, "expected an array");
        if (dist[i].size() != dist.size()) throw FormatError(row_where, "matrix is not square");
        std::vector<double> row;
        for (std::size_t j = 0; j < dist[i].size(); ++j) {
            row.push_back(number_at(dist[i][j], row_where + "/" + std::to_string(j)));
        }
        rows.push_back(std::move(row));
    }
    file.dist = DistanceMatrix::from_rows(rows);
    if (file.points.size() != file.dist.size()) {
        throw FormatError("/points", "has " + std::to_string(file.points.size()) + " labels for a " +
                                         std::to_string(file.dist.size()) + "-point matrix");
    }

    if (doc.contains("anchor")) file.anchor = index_at(doc["anchor"], "/anchor");
    if (doc.contains("map")) file.map = index_list(doc["map"], "/map");
    if (doc.contains("partition")) {
        const Json& part = doc["partition"];
        if (!part.is_array()) throw FormatError("/partition", "expected an array of index arrays");
        std::vector<std::vector<PointIndex>> sets;
        for (std::size_t i = 0; i < part.size(); ++i) {
            sets.push_back(index_list(part[i], "/partition/" + std::to_string(i)));
        }
        file.partition = std::move(sets);
    }
    if (doc.contains("pata")) file.pata = pata_from_json(doc["pata"]);
    if (doc.contains("grid")) file.grid = grid_from_json(doc["grid"]);
    return file;
}

Instance build_instance(const InstanceFile& file, std::optional<double> metric_tolerance) {
    FiniteMetricSpace space = FiniteMetricSpace::create(file.points, file.dist, metric_tolerance);
    if (!file.map) throw StructuralError("instance has no \"map\"");
    const std::size_t n = space.size();
    SelfMap map(*file.map, n);
    const PointIndex anchor = file.anchor.value_or(0);
    if (anchor >= n) throw StructuralError("anchor out of range");
    std::optional<CyclicRepresentation> rep;
    if (file.partition) rep.emplace(*file.partition, n);
    return Instance{std::move(space), anchor, std::move(map), std::move(rep), file.pata, file.grid};
}

Json to_json(const PataParams& params) {
    return Json{{"Lambda", params.Lambda},
                {"alpha", params.alpha},
                {"beta", params.beta},
                {"psi", Json{{"kind", "power"}, {"p", params.psi.p}, {"c", params.psi.c}}}};
}

Json to_json(const EpsilonGrid& grid) {
    if (grid == EpsilonGrid::uniform(grid.size())) return Json{{"points", grid.size()}};
    return Json{{"values", grid.values()}};
}

Json to_json(const Instance& instance) {
    Json j;
    j["points"] = instance.space.labels();
    j["dist"] = instance.space.matrix().rows();
    j["anchor"] = instance.anchor;
    j["map"] = std::vector<PointIndex>(instance.map.image().begin(), instance.map.image().end());
    if (instance.rep) j["partition"] = instance.rep->sets();
    if (instance.pata) j["pata"] = to_json(*instance.pata);
    if (instance.grid) j["grid"] = to_json(*instance.grid);
    return j;
}

Json to_json(const ValidationReport& report) {
    Json violations = Json::array();
    for (const auto& v : report.violations) {
        violations.push_back(
            Json{{"kind", to_string(v.kind)}, {"indices", v.indices}, {"magnitude", v.magnitude}});
    }
    return Json{{"ok", report.ok()}, {"violations", std::move(violations)}};
}

Json to_json(const CyclicValidation& validation) {
    Json failures = Json::array();
    for (const auto& f : validation.inclusion_failures) {
        failures.push_back(Json{{"set", f.set}, {"point", f.point}, {"image", f.image}});
    }
    return Json{{"ok", validation.ok()},
                {"inclusion_failures", std::move(failures)},
                {"uncovered", validation.uncovered}};
}

Json to_json(const Certificate& c) {
    Json witness = nullptr;
    if (c.witness) {
        const Witness& w = *c.witness;
        witness = Json{{"x", w.x},
                       {"y", w.y},
                       {"set", optional_json(w.set)},
                       {"eps_index", optional_json(w.eps_index)},
                       {"eps", optional_json(w.eps)},
                       {"lhs", w.lhs},
                       {"rhs", w.rhs}};
    }
    return Json{{"holds", c.holds},
                {"condition", to_string(c.condition)},
                {"pairs_checked", c.pairs_checked},
                {"eps_checked", c.eps_checked},
                {"min_slack", c.min_slack},
                {"tolerance", c.tolerance},
                {"witness", std::move(witness)},
                {"lambda_min", optional_json(c.lambda_min)}};
}

Json to_json(const PicardTrace& t) {
    return Json{{"start", t.start},
                {"iterates", t.iterates},
                {"steps", t.steps},
                {"norms", t.norms},
                {"set_index", t.set_index},
                {"terminated", to_string(t.terminated)}};
}

Json to_json(const TraceDiagnostics& d) {
    Json failures = Json::array();
    for (const auto& f : d.failures) {
        failures.push_back(
            Json{{"kind", to_string(f.kind)}, {"n", f.n}, {"before", f.before}, {"after", f.after}});
    }
    return Json{{"start", d.start},
                {"ok", d.ok()},
                {"failures", std::move(failures)},
                {"c_max", d.c_max},
                {"boundedness", Json{{"c2", d.bound.c2}, {"pass_by_k", d.bound.pass}, {"fail_by_k", d.bound.fail}}}};
}

Json to_json(const FixedPointReport& r) {
    Json traces = Json::array();
    for (const auto& t : r.traces) traces.push_back(to_json(t));
    Json diagnostics = Json::array();
    for (const auto& d : r.diagnostics) diagnostics.push_back(to_json(d));
    return Json{{"fixed_points", r.fixed_points},
                {"unique", r.unique},
                {"in_intersection", r.in_intersection},
                {"all_converge_to_same", r.all_converge_to_same},
                {"traces", std::move(traces)},
                {"certificate", to_json(r.certificate)},
                {"asserted", r.asserted},
                {"violations", r.violations},
                {"diagnostics", std::move(diagnostics)}};
}

Json to_json(const GenConfig& cfg) {
    return Json{{"n_points", cfg.n_points},
                {"m_sets", cfg.m_sets},
                {"method", to_string(cfg.method)},
                {"embed_dim", cfg.embed_dim},
                {"seed", cfg.seed},
                {"overlap_fraction", cfg.overlap_fraction},
                {"hub_bias", cfg.hub_bias}};
}

GenConfig gen_config_from_json(const Json& j) {
    if (!j.is_object()) throw FormatError("", "config must be a JSON object");
    GenConfig cfg;
    if (j.contains("n_points")) cfg.n_points = index_at(j["n_points"], "/n_points");
    if (j.contains("m_sets")) cfg.m_sets = index_at(j["m_sets"], "/m_sets");
    if (j.contains("embed_dim")) cfg.embed_dim = index_at(j["embed_dim"], "/embed_dim");
    if (j.contains("seed")) cfg.seed = index_at(j["seed"], "/seed");
    if (j.contains("overlap_fraction")) cfg.overlap_fraction = number_at(j["overlap_fraction"], "/overlap_fraction");
    if (j.contains("hub_bias")) cfg.hub_bias = number_at(j["hub_bias"], "/hub_bias");
    if (j.contains("method")) {
        const Json& m = j["method"];
        if (m == "euclidean_embed") {
            cfg.method = EmbedMethod::euclidean_embed;
        } else if (m == "random_repair") {
            cfg.method = EmbedMethod::random_repair;
        } else {
            throw FormatError("/method", "expected \"euclidean_embed\" or \"random_repair\"");
        }
    }
    cfg.validate();
    return cfg;
}

Json to_json(const Classification& c) {
    return Json{{"kannan", c.kannan},
                {"cyclic_kannan", c.cyclic_kannan},
                {"banach", c.banach},
                {"cyclic_kannan_pata", c.cyclic_kannan_pata},
                {"lambda_min", c.lambda_min},
                {"cyclic_lambda_min", c.cyclic_lambda_min},
                {"lipschitz", c.lipschitz}};
}

Json to_json(const ClassCounts& c) {
    return Json{{"generated", c.generated},
                {"kannan", c.kannan},
                {"cyclic_kannan", c.cyclic_kannan},
                {"banach", c.banach},
                {"cyclic_kannan_pata", c.cyclic_kannan_pata},
                {"kannan_and_banach", c.kannan_and_banach},
                {"kannan_not_banach", c.kannan_not_banach},
                {"banach_not_kannan", c.banach_not_kannan},
                {"neither", c.neither}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::string hex;
    hex.reserve(2 * len);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

}  // namespace kpcert::io
