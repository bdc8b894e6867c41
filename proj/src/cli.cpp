#include "qboltz/cli.hpp"

#include "qboltz/config.hpp"
#include "qboltz/dyson.hpp"
#include "qboltz/fock_module.hpp"
#include "qboltz/oracle.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

namespace qboltz::cli {

namespace {

using nlohmann::json;

struct Options {
    std::string config;
    std::optional<int> max_word_len;
    std::optional<int> max_order;
    std::optional<int> nmax;
    std::optional<double> tol;
    bool force = false;
    bool text = false;
    std::vector<std::string> words;
    std::string dump_dir;
};

struct Outcome {
    json doc;
    int code = kExitPass;
    std::string text;
};

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(3) << std::scientific << v;
    return os.str();
}

std::string report_line(const Report& r) {
    return r.check + ": " + (r.passed() ? "PASS" : "FAIL") + " (violations " + std::to_string(r.violation_count()) +
           ", max deviation " + format_double(r.max_deviation) + ")\n";
}

// The system a command runs on: generic systems always, rejected ones only when forced.
GenericSystem resolve_system(const RunConfig& cfg, bool force) {
    auto result = validate_generic(cfg.spectrum);
    if (auto* system = std::get_if<GenericSystem>(&result)) return *system;
    if (!force)
        throw Error(ErrorCode::NotGeneric, "spectrum is not generic (run 'validate' for evidence, or pass --force)");
    return force_system(cfg.spectrum);
}

Outcome cmd_validate(const RunConfig& cfg) {
    Outcome o;
    o.doc["command"] = "validate";
    o.doc["dimension"] = cfg.spectrum.dimension();
    json levels = json::array();
    for (const auto& l : cfg.spectrum.levels()) levels.push_back({{"label", l.label}, {"energy", to_string(l.energy)}});
    o.doc["levels"] = levels;

    auto result = validate_generic(cfg.spectrum);
    if (auto* system = std::get_if<GenericSystem>(&result)) {
        json freqs = json::array();
        std::string text;
        for (const auto& omega : system->frequencies()) {
            const BohrFrequency f = system->bohr_frequency(omega);
            freqs.push_back({{"omega", to_string(f.value)}, {"lower", f.lower}, {"upper", f.upper}});
            text += "  omega = " + to_string(f.value) + "  (" + f.lower + " -> " + f.upper + ")\n";
        }
        o.doc["generic"] = true;
        o.doc["frequencies"] = freqs;
        o.doc["frequency_count"] = freqs.size();
        o.text = "generic system, " + std::to_string(freqs.size()) + " Bohr frequencies\n" + text;
        return o;
    }

    const auto& report = std::get<RejectionReport>(result);
    o.code = kExitViolation;
    o.doc["generic"] = false;
    json reasons = json::array();
    for (auto r : report.reasons) reasons.push_back(std::string(rejection_reason_name(r)));
    o.doc["reasons"] = reasons;
    json degenerate = json::array();
    o.text = "rejected:";
    for (auto r : report.reasons) o.text += " " + std::string(rejection_reason_name(r));
    o.text += "\n";
    for (const auto& d : report.degenerate_energies) {
        degenerate.push_back({{"energy", to_string(d.energy)}, {"labels", d.labels}});
        o.text += "  energy " + to_string(d.energy) + " carried by " + std::to_string(d.labels.size()) + " levels\n";
    }
    o.doc["degenerate_energies"] = degenerate;
    json duplicates = json::array();
    for (const auto& d : report.duplicate_frequencies) {
        json pairs = json::array();
        for (const auto& [lo, hi] : d.pairs) pairs.push_back({lo, hi});
        duplicates.push_back({{"omega", to_string(d.value)}, {"multiplicity", d.pairs.size()}, {"pairs", pairs}});
        o.text += "  omega = " + to_string(d.value) + " realized by " + std::to_string(d.pairs.size()) + " pairs\n";
    }
    o.doc["duplicate_frequencies"] = duplicates;
    return o;
}

Outcome collect(const std::string& command, const std::vector<Report>& reports) {
    Outcome o;
    o.doc["command"] = command;
    json arr = json::array();
    bool passed = true;
    for (const auto& r : reports) {
        arr.push_back(r.to_json());
        passed = passed && r.passed();
        o.text += report_line(r);
    }
    o.doc["reports"] = arr;
    o.doc["passed"] = passed;
    o.code = passed ? kExitPass : kExitViolation;
    o.text += passed ? "all checks passed\n" : "violations found\n";
    return o;
}

Outcome cmd_relations(const RunConfig& cfg, const Options& opt) {
    const GenericSystem system = resolve_system(cfg, opt.force);
    const LabelSpace& labels = cfg.require_labels();
    const auto omegas = frequency_set(system, cfg.frequencies);
    const int max_order = opt.max_order.value_or(cfg.max_order);
    const double tol = opt.tol.value_or(cfg.tolerance.value_or(kRelationTolerance));

    // Build the oracle first so a capacity error is reported before any long run.
    const OracleRep rep = build_oracle(system, labels, opt.nmax.value_or(cfg.cutoff), omegas, cfg.max_dimension);

    std::vector<Report> reports;
    reports.push_back(check_c_squared(system, labels, omegas));
    RelationCheckOptions relation;
    relation.max_order = max_order;
    relation.omegas = omegas;
    relation.force = opt.force;
    reports.push_back(check_module_relation(system, labels, relation));
    reports.push_back(search_residual_witnesses(system, labels, max_order, omegas));
    reports.push_back(oracle_check_c_squared(rep, labels));
    reports.push_back(oracle_check_relation(rep, labels, max_order, tol));
    Outcome o = collect("relations", reports);
    o.doc["generic"] = system.is_generic();
    return o;
}

std::vector<EntangledWord> all_words(const std::vector<NoiseLabel>& labels, int max_length) {
    std::vector<EntangledWord> out{EntangledWord{}};
    std::size_t begin = 0;
    for (int len = 1; len <= max_length; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (bool creator : {false, true}) {
                for (const auto& l : labels) {
                    EntangledWord w = out[i];
                    w.push_back({creator, l});
                    out.push_back(std::move(w));
                }
            }
        }
        begin = end;
    }
    return out;
}

Outcome cmd_moments(const RunConfig& cfg, const Options& opt) {
    const GenericSystem system = resolve_system(cfg, opt.force);
    const LabelSpace& labels = cfg.require_labels();
    const auto omegas = frequency_set(system, cfg.frequencies);
    const double tol = opt.tol.value_or(cfg.tolerance.value_or(kRelationTolerance));

    std::vector<EntangledWord> words;
    const auto& specs = opt.words.empty() ? cfg.words : opt.words;
    for (const auto& spec : specs) words.push_back(parse_word(spec, labels));
    if (specs.empty()) words = all_words(labels.all_labels(omegas), opt.max_word_len.value_or(cfg.max_word_len));

    CrossValidationOptions cv;
    cv.cutoff = opt.nmax.value_or(cfg.cutoff);
    cv.omegas = omegas;
    cv.max_dimension = cfg.max_dimension;
    const auto rows = cross_validate(system, labels, words, cv);
    const Report summary = summarize(rows, tol);

    Outcome o;
    o.doc["command"] = "moments";
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"word", r.word},
                       {"symbolic", r.symbolic.to_string()},
                       {"oracle", matrix_json(r.oracle)},
                       {"deviation", r.deviation}});
    o.doc["moments"] = arr;
    o.doc["summary"] = summary.to_json();
    o.code = summary.passed() ? kExitPass : kExitViolation;
    if (specs.empty() && words.size() > 50) {
        o.text = std::to_string(words.size()) + " words\n";
    } else {
        for (const auto& r : rows)
            o.text += r.word + " = " + r.symbolic.to_string() + "  (oracle deviation " + format_double(r.deviation) +
                      ")\n";
    }
    o.text += report_line(summary);

    if (!opt.dump_dir.empty()) {
        const OracleRep rep = build_oracle(system, labels, cv.cutoff, omegas, cfg.max_dimension);
        dump_oracle(rep, labels, opt.dump_dir);
        o.doc["dump_directory"] = opt.dump_dir;
    }
    return o;
}

Outcome cmd_compare_reps(const RunConfig& cfg, const Options& opt) {
    const GenericSystem system = resolve_system(cfg, opt.force);
    RepresentationOptions ro;
    ro.max_length = opt.max_word_len.value_or(cfg.max_word_len);
    ro.omegas = frequency_set(system, cfg.frequencies);
    return collect("compare-reps", {compare_representations(system, cfg.require_labels(), ro)});
}

ComplexVector system_state(const RunConfig& cfg) {
    const auto d = static_cast<Eigen::Index>(cfg.spectrum.dimension());
    ComplexVector psi = ComplexVector::Zero(d);
    if (cfg.psi) {
        for (Eigen::Index i = 0; i < d; ++i) psi(i) = to_complex((*cfg.psi)[static_cast<std::size_t>(i)]);
        if (psi.norm() == 0.0) throw Error(ErrorCode::MalformedInput, "'psi' is the zero vector");
        psi.normalize();
    } else {
        psi(d - 1) = 1.0;  // the top level: the only one that can emit from the vacuum at every ω
    }
    return psi;
}

Outcome cmd_dyson(const RunConfig& cfg, const Options& opt) {
    if (!cfg.interaction) throw Error(ErrorCode::MalformedInput, "config has no interaction (couplings/time_grid)");
    const GenericSystem system = resolve_system(cfg, opt.force);
    const LabelSpace& labels = cfg.require_labels();
    const InteractionSpec& spec = *cfg.interaction;
    check_interaction(spec, system);
    const int n_max = opt.max_order.value_or(cfg.dyson_order);
    const int cutoff = opt.nmax.value_or(cfg.cutoff);
    const double tol = opt.tol.value_or(cfg.tolerance.value_or(1e-8));
    const ComplexVector psi = system_state(cfg);

    const auto orders = propagator_matrix_elements(system, labels, spec, psi, psi, n_max, cutoff, cfg.max_dimension);
    const bool structural = depends_only_on_entangled(system, labels, spec, n_max);
    const OracleRep rep = build_oracle(system, labels, cutoff, {}, cfg.max_dimension);
    const double defect = unitarity_defect(rep, spec, psi, n_max);

    Outcome o;
    o.doc["command"] = "dyson";
    json arr = json::array();
    bool agree = true, odd_zero = true;
    double worst = 0.0;
    for (const auto& p : orders) {
        const bool within = std::max(p.deviation, p.state_deviation) <= tol;
        agree = agree && within;
        if (p.order % 2 == 1) odd_zero = odd_zero && p.symbolic_operator.is_zero();
        worst = std::max({worst, p.deviation, p.state_deviation});
        arr.push_back({{"order", p.order},
                       {"symbolic_operator", p.symbolic_operator.to_string()},
                       {"symbolic", complex_json(p.symbolic)},
                       {"oracle", complex_json(p.oracle)},
                       {"deviation", p.deviation},
                       {"state_deviation", p.state_deviation},
                       {"within_tolerance", within}});
        std::ostringstream line;
        line << "order " << p.order << ": symbolic " << p.symbolic << "  oracle " << p.oracle << "  deviation "
             << format_double(p.deviation) << "  state deviation " << format_double(p.state_deviation) << "\n";
        o.text += line.str();
    }
    o.doc["orders"] = arr;
    o.doc["depends_only_on_entangled"] = structural;
    o.doc["odd_orders_symbolically_zero"] = odd_zero;
    o.doc["max_deviation"] = worst;
    o.doc["tolerance"] = tol;
    o.doc["unitarity_defect"] = defect;
    o.doc["grid"] = {{"points", spec.points}, {"dt", to_string(spec.dt)}};
    const bool passed = agree && structural && odd_zero;
    o.doc["passed"] = passed;
    o.code = passed ? kExitPass : kExitViolation;
    o.text += std::string("depends only on entangled generators: ") + (structural ? "yes" : "NO") + "\n";
    o.text += std::string("odd orders symbolically zero: ") + (odd_zero ? "yes" : "NO") + "\n";
    o.text += "unitarity defect (reported only): " + format_double(defect) + "\n";
    o.text += passed ? "all checks passed\n" : "violations found\n";
    return o;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entangled operator algebra checks"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "JSON run configuration")->required();
        sub->add_flag("--text", opt.text, "plaintext summary instead of JSON");
        sub->add_flag("--force", opt.force, "run on a non-generic spectrum");
    };
    auto add_bounds = [&](CLI::App* sub) {
        sub->add_option("--max-word-len", opt.max_word_len, "longest word")->check(CLI::PositiveNumber);
        sub->add_option("--max-order", opt.max_order, "vector order (relations) or Dyson order")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--nmax", opt.nmax, "oracle occupation cutoff")->check(CLI::PositiveNumber);
        sub->add_option("--tol", opt.tol, "numeric tolerance")->check(CLI::PositiveNumber);
    };

    auto* validate = app.add_subcommand("validate", "genericity test and Bohr frequencies");
    add_common(validate);
    auto* relations = app.add_subcommand("relations", "module relations, symbolic and oracle");
    add_common(relations);
    add_bounds(relations);
    auto* moments = app.add_subcommand("moments", "vacuum expectations, symbolic vs oracle");
    add_common(moments);
    add_bounds(moments);
    moments->add_option("--word", opt.words, "word such as \"c(1,t0,k1) c*(1,t0,k1)\" (repeatable)");
    moments->add_option("--dump-oracle", opt.dump_dir, "write dense oracle matrices to this directory");
    auto* compare = app.add_subcommand("compare-reps", "direct, tensor and factorized representations");
    add_common(compare);
    add_bounds(compare);
    auto* dyson = app.add_subcommand("dyson", "discrete Dyson series of the propagator");
    add_common(dyson);
    add_bounds(dyson);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    try {
        const RunConfig cfg = load_config(opt.config);
        Outcome o;
        if (validate->parsed()) o = cmd_validate(cfg);
        else if (relations->parsed()) o = cmd_relations(cfg, opt);
        else if (moments->parsed()) o = cmd_moments(cfg, opt);
        else if (compare->parsed()) o = cmd_compare_reps(cfg, opt);
        else o = cmd_dyson(cfg, opt);
        if (opt.text)
            out << o.text;
        else
            out << o.doc.dump(2) << "\n";
        return o.code;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        if (!opt.text) out << json{{"error", std::string(error_code_name(e.code()))}, {"message", e.what()}}.dump(2) << "\n";
        return kExitInputError;
    }
}

}  // namespace qboltz::cli
