#include "kpcert/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kpcert/certify.hpp"
#include "kpcert/errors.hpp"
#include "kpcert/generate.hpp"
#include "kpcert/io.hpp"
#include "kpcert/picard.hpp"

namespace kpcert::cli {

namespace {

using io::Json;

struct GlobalOptions {
    std::string input;
    std::string output;
    std::optional<double> tol;
    std::optional<std::size_t> grid;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> max_iter;
    bool json = false;
};

/// A failure that ends the command with exit code 2 and a structured report.
struct CommandError {
    std::string kind;
    std::string message;
    Json detail = nullptr;
};

struct Outcome {
    int code = kOk;
    Json config = Json::object();
    Json result = Json::object();
    std::string summary;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CommandError{"io", "cannot read " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw CommandError{"parse", e.what(), Json{{"byte", e.byte}}};
    }
}

std::string fmt_num(double v) { return Json(v).dump(); }

/// Parses and validates an instance, mapping every failure to exit code 2.
Instance load_instance(const std::string& text, const GlobalOptions& g) {
    try {
        return io::build_instance(io::parse_instance_file(parse_json(text)), g.tol);
    } catch (const io::FormatError& e) {
        throw CommandError{"format", e.what(), Json{{"where", e.where()}}};
    } catch (const MetricError& e) {
        throw CommandError{"metric", e.what(), io::to_json(e.report())};
    } catch (const std::invalid_argument& e) {
        throw CommandError{"structure", e.what()};
    }
}

EpsilonGrid pick_grid(const Instance& inst, const GlobalOptions& g) {
    if (g.grid) return EpsilonGrid::uniform(*g.grid);
    if (inst.grid) return *inst.grid;
    return EpsilonGrid::uniform(kDefaultGridPoints);
}

CertifyOptions certify_options(const GlobalOptions& g) {
    CertifyOptions opts;
    opts.tolerance = g.tol;
    return opts;
}

Outcome do_validate(const std::string& text, const GlobalOptions& g) {
    io::InstanceFile file;
    try {
        file = io::parse_instance_file(parse_json(text));
    } catch (const io::FormatError& e) {
        throw CommandError{"format", e.what(), Json{{"where", e.where()}}};
    } catch (const std::invalid_argument& e) {
        throw CommandError{"structure", e.what()};
    }

    Outcome out;
    const double tol = g.tol.value_or(default_metric_tolerance(file.dist));
    out.config = Json{{"tol", tol}};
    ValidationReport metric;
    try {
        metric = validate_metric(file.dist, tol);
    } catch (const StructuralError& e) {
        throw CommandError{"structure", e.what()};
    }
    out.result["metric"] = io::to_json(metric);
    bool ok = metric.ok();

    const std::size_t n = file.dist.size();
    if (n == 0) throw CommandError{"structure", "instance has no points"};
    if (file.anchor && *file.anchor >= n) throw CommandError{"structure", "anchor out of range"};
    out.result["cyclic"] = nullptr;
    if (file.map) {
        try {
            SelfMap map(*file.map, n);
            if (file.partition) {
                CyclicValidation cyclic = validate_cyclic(CyclicRepresentation(*file.partition, n), map);
                ok = ok && cyclic.ok();
                out.result["cyclic"] = io::to_json(cyclic);
            }
        } catch (const StructuralError& e) {
            throw CommandError{"structure", e.what()};
        }
    }
    out.result["ok"] = ok;
    out.code = ok ? kOk : kFails;
    out.summary = ok ? "valid" : "invalid (" + std::to_string(metric.violations.size()) + " metric violations)";
    return out;
}

Outcome do_certify(const std::string& text, const GlobalOptions& g, const std::string& tag) {
    const auto condition = condition_from_string(tag);
    if (!condition) throw CommandError{"usage", "unknown condition " + tag};
    const Instance inst = load_instance(text, g);

    const bool cyclic = *condition == Condition::cyclic_kannan || *condition == Condition::cyclic_kannan_pata;
    const bool pata = *condition == Condition::cyclic_kannan_pata || *condition == Condition::chakraborty_samanta ||
                      *condition == Condition::pata_banach;
    if (cyclic && !inst.rep) throw CommandError{"usage", tag + " needs a \"partition\""};
    if (pata && !inst.pata) throw CommandError{"usage", tag + " needs \"pata\" parameters"};

    Outcome out;
    const CertifyOptions opts = certify_options(g);
    out.config = Json{{"condition", tag}};
    std::optional<EpsilonGrid> grid;
    if (pata) {
        grid = pick_grid(inst, g);
        out.config["grid"] = io::to_json(*grid);
        out.config["pata"] = io::to_json(*inst.pata);
    }
    if (g.tol) out.config["tol"] = *g.tol;

    Certificate cert;
    try {
        switch (*condition) {
            case Condition::kannan: cert = certify_kannan(inst.space, inst.map, opts); break;
            case Condition::cyclic_kannan: cert = certify_cyclic_kannan(inst.space, inst.map, *inst.rep, opts); break;
            case Condition::cyclic_kannan_pata:
                cert = certify_cyclic_kannan_pata(inst.anchored(), inst.map, *inst.rep, *inst.pata, *grid, opts);
                break;
            case Condition::chakraborty_samanta:
                cert = certify_chakraborty_samanta(inst.anchored(), inst.map, *inst.pata, *grid, opts);
                break;
            case Condition::pata_banach:
                cert = certify_pata_banach(inst.anchored(), inst.map, *inst.pata, *grid, opts);
                break;
        }
    } catch (const PreconditionError& e) {
        throw CommandError{"precondition", e.what()};
    } catch (const std::invalid_argument& e) {
        throw CommandError{"parameter", e.what()};
    }

    out.result = io::to_json(cert);
    out.code = cert.holds ? kOk : kFails;
    out.summary = tag + (cert.holds ? ": holds" : ": fails") + " (min_slack " + fmt_num(cert.min_slack);
    if (cert.lambda_min) out.summary += ", lambda_min " + fmt_num(*cert.lambda_min);
    if (cert.witness) {
        out.summary += ", witness (" + std::to_string(cert.witness->x) + ", " + std::to_string(cert.witness->y) + ")";
    }
    out.summary += ")";
    return out;
}

Outcome do_solve(const std::string& text, const GlobalOptions& g) {
    const Instance inst = load_instance(text, g);
    if (!inst.rep) throw CommandError{"usage", "solve needs a \"partition\""};
    if (!inst.pata) throw CommandError{"usage", "solve needs \"pata\" parameters"};

    SolveOptions opts;
    opts.certify = certify_options(g);
    opts.max_iter = g.max_iter.value_or(0);
    const EpsilonGrid grid = pick_grid(inst, g);

    Outcome out;
    out.config = Json{{"grid", io::to_json(grid)},
                      {"pata", io::to_json(*inst.pata)},
                      {"max_iter", opts.max_iter == 0 ? inst.space.size() + 1 : opts.max_iter}};
    if (g.tol) out.config["tol"] = *g.tol;

    FixedPointReport report;
    try {
        report = solve(inst.anchored(), inst.map, *inst.rep, *inst.pata, grid, opts);
    } catch (const PreconditionError& e) {
        throw CommandError{"precondition", e.what()};
    } catch (const std::invalid_argument& e) {
        throw CommandError{"parameter", e.what()};
    }

    out.result = io::to_json(report);
    out.code = report.conforms() ? kOk : kFails;
    std::string fps;
    for (PointIndex x : report.fixed_points) fps += (fps.empty() ? "" : ", ") + inst.space.label(x);
    out.summary = std::string("certificate ") + (report.certificate.holds ? "holds" : "fails") +
                  "; fixed points [" + fps + "]" +
                  (report.asserted ? (report.violations.empty() ? "; fixed-point conclusions verified"
                                                                : "; CONCLUSION VIOLATIONS: " +
                                                                      std::to_string(report.violations.size()))
                                   : "; conclusions not asserted");
    return out;
}

struct GenerateOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::size_t> n, m, dim, keep;
    std::optional<std::string> method;
    std::optional<double> overlap, hub_bias;
    bool search = false;
    std::size_t budget = 100;
};

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << contents)) throw CommandError{"io", "cannot write " + path.string()};
}

/// A generated instance with the grid and, when its cyclic Kannan constant is
/// below 1, the reduction parameters filled in.
Json instance_document(Instance inst, const Classification& c) {
    inst.grid = EpsilonGrid::uniform(kDefaultGridPoints);
    if (c.cyclic_kannan) inst.pata = reduction_params(c.cyclic_lambda_min);
    return io::to_json(inst);
}

Outcome do_generate(const GenerateOptions& gen, const GlobalOptions& g, std::string& digest_source) {
    GenConfig cfg;
    try {
        if (!gen.config_path.empty()) {
            digest_source = read_file(gen.config_path);
            cfg = io::gen_config_from_json(parse_json(digest_source));
        }
        if (gen.n) cfg.n_points = *gen.n;
        if (gen.m) cfg.m_sets = *gen.m;
        if (gen.dim) cfg.embed_dim = *gen.dim;
        if (gen.overlap) cfg.overlap_fraction = *gen.overlap;
        if (gen.hub_bias) cfg.hub_bias = *gen.hub_bias;
        if (g.seed) cfg.seed = *g.seed;
        if (gen.method) {
            if (*gen.method == "euclidean_embed") {
                cfg.method = EmbedMethod::euclidean_embed;
            } else if (*gen.method == "random_repair") {
                cfg.method = EmbedMethod::random_repair;
            } else {
                throw CommandError{"usage", "unknown method " + *gen.method};
            }
        }
        cfg.validate();
    } catch (const io::FormatError& e) {
        throw CommandError{"format", e.what(), Json{{"where", e.where()}}};
    } catch (const std::invalid_argument& e) {
        throw CommandError{"parameter", e.what()};
    }
    if (gen.config_path.empty()) digest_source = io::to_json(cfg).dump();

    const std::filesystem::path dir(gen.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw CommandError{"io", "cannot create " + dir.string()};

    Outcome out;
    out.config = io::to_json(cfg);
    Json manifest{{"tool_version", kToolVersion}, {"config", io::to_json(cfg)}};
    const EpsilonGrid grid = EpsilonGrid::uniform(kDefaultGridPoints);

    if (!gen.search) {
        Instance inst = random_cyclic_instance(cfg);
        const Classification c = classify(inst, grid);
        const std::string name = "instance_" + std::to_string(cfg.seed) + ".json";
        write_file(dir / name, io::dump(instance_document(std::move(inst), c)));
        manifest["instances"] = Json::array({Json{{"file", name}, {"seed", cfg.seed}, {"classification", io::to_json(c)}}});
        out.summary = "wrote " + name;
    } else {
        if (gen.budget == 0) throw CommandError{"usage", "--budget must be at least 1"};
        const SearchResult found = search_separating_instances(cfg, gen.budget, gen.keep.value_or(5));
        manifest["budget"] = gen.budget;
        manifest["counts"] = io::to_json(found.counts);
        Json files = Json::array();
        auto emit = [&](const std::vector<ClassifiedInstance>& group, const std::string& cls) {
            for (const auto& ci : group) {
                const std::string name = cls + "_" + std::to_string(ci.seed) + ".json";
                write_file(dir / name, io::dump(instance_document(ci.instance, ci.classification)));
                files.push_back(Json{{"file", name},
                                     {"seed", ci.seed},
                                     {"class", cls},
                                     {"classification", io::to_json(ci.classification)}});
            }
        };
        emit(found.kannan_not_banach, "kannan_not_banach");
        emit(found.banach_not_kannan, "banach_not_kannan");
        manifest["instances"] = std::move(files);
        out.summary = "classified " + std::to_string(found.counts.generated) + " instances: " +
                      std::to_string(found.counts.kannan_not_banach) + " kannan-not-banach, " +
                      std::to_string(found.counts.banach_not_kannan) + " banach-not-kannan";
    }
    write_file(dir / "manifest.json", io::dump(manifest));
    out.result = std::move(manifest);
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certify Kannan-type and cyclic Kannan-Pata contractive conditions on finite "
                 "metric spaces and verify fixed points by Picard iteration.",
                 "kpcert"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("-i,--input", g.input, "Instance JSON file");
    app.add_option("-o,--output", g.output, "Also write the JSON report to this file");
    app.add_option("--tol", g.tol, "Tolerance (metric validation or certificate slack)");
    app.add_option("--grid", g.grid, "Uniform epsilon grid size (overrides the instance)")->check(CLI::Range(2, 1 << 30));
    app.add_option("--seed", g.seed, "Generator seed");
    app.add_option("--max-iter", g.max_iter, "Picard iteration cap (default: points + 1)")->check(CLI::PositiveNumber);
    app.add_flag("--json", g.json, "Print the machine-readable report on stdout");

    std::string positional;
    auto* validate = app.add_subcommand("validate", "Check the metric axioms and the cyclic representation");
    validate->add_option("input", positional, "Instance JSON file");
    validate->fallthrough();

    std::string condition;
    auto* certify = app.add_subcommand("certify", "Exhaustively certify a contractive condition");
    certify->add_option("input", positional, "Instance JSON file");
    certify->add_option("--condition", condition, "kannan | cyclic-kannan | ck-pata | cs | pata")
        ->required()
        ->check(CLI::IsMember({"kannan", "cyclic-kannan", "ck-pata", "cs", "pata"}));
    certify->fallthrough();

    auto* solve_cmd = app.add_subcommand("solve", "Certify, iterate from every point and check the conclusions");
    solve_cmd->add_option("input", positional, "Instance JSON file");
    solve_cmd->fallthrough();

    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Generate seeded instances or search for separating ones");
    generate->add_option("--config", gen.config_path, "GenConfig JSON file");
    generate->add_option("--out", gen.out_dir, "Output directory");
    generate->add_option("--n", gen.n, "Number of points");
    generate->add_option("--m", gen.m, "Number of sets");
    generate->add_option("--dim", gen.dim, "Embedding dimension");
    generate->add_option("--method", gen.method, "euclidean_embed | random_repair");
    generate->add_option("--overlap", gen.overlap, "Overlap fraction in [0, 1]");
    generate->add_option("--hub-bias", gen.hub_bias, "Probability of mapping toward the hub point");
    generate->add_flag("--search-separating", gen.search, "Classify a batch and keep separating instances");
    generate->add_option("--budget", gen.budget, "Instances to classify when searching");
    generate->add_option("--keep", gen.keep, "Separating instances kept per class");
    generate->fallthrough();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }

    const auto* chosen = app.get_subcommands().front();
    const std::string command = chosen->get_name();
    if (g.input.empty()) g.input = positional;

    const auto started = std::chrono::steady_clock::now();
    Outcome outcome;
    std::string digest_source;
    try {
        if (command == "generate") {
            outcome = do_generate(gen, g, digest_source);
        } else {
            if (g.input.empty()) throw CommandError{"usage", command + " needs an input file"};
            digest_source = read_file(g.input);
            if (command == "validate") {
                outcome = do_validate(digest_source, g);
            } else if (command == "certify") {
                outcome = do_certify(digest_source, g, condition);
            } else {
                outcome = do_solve(digest_source, g);
            }
        }
    } catch (const CommandError& e) {
        outcome.code = kError;
        outcome.result = Json{{"error", Json{{"kind", e.kind}, {"message", e.message}, {"detail", e.detail}}}};
        outcome.summary = "error: " + e.message;
    } catch (const std::exception& e) {
        outcome.code = kError;
        outcome.result = Json{{"error", Json{{"kind", "internal"}, {"message", e.what()}, {"detail", nullptr}}}};
        outcome.summary = std::string("error: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();

    Json report{{"tool_version", kToolVersion},
                {"command", command},
                {"input_digest", "sha256:" + io::sha256_hex(digest_source)},
                {"config", outcome.config},
                {"exit_code", outcome.code},
                {"result", outcome.result},
                {"timing_ms", elapsed}};
    const std::string text = io::dump(report);

    if (!g.output.empty()) {
        std::ofstream f(g.output, std::ios::binary);
        if (!f || !(f << text)) {
            err << "error: cannot write " << g.output << "\n";
            return kError;
        }
    }
    if (g.json) {
        out << text;
    } else if (outcome.code == kError) {
        err << outcome.summary << "\n";
    } else {
        out << command << ": " << outcome.summary << "\n";
    }
    return outcome.code;
}

}  // namespace kpcert::cli
