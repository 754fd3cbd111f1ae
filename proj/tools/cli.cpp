#include "cli.hpp"

#include "hubness/error.hpp"
#include "hubness/eval.hpp"
#include "hubness/io.hpp"
#include "hubness/parallel.hpp"
#include "hubness/random.hpp"
#include "hubness/secondary.hpp"
#include "hubness/serialize.hpp"
#include "hubness/synth.hpp"
#include "hubness/transforms.hpp"
#include "hubness/validate.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace hubness::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kLargeInputRows = 200000;

struct Options {
    std::string input;
    std::string test_input;
    std::string labels;
    std::string test_labels;
    std::size_t k = 10;
    std::string pipeline;
    std::string secondary = "none";
    std::string mp_sample_size = "auto";
    std::size_t ls_m = 5;
    std::uint64_t seed = 0;
    std::string out;
    std::string test_out;
    std::string format = "json";
    std::string histogram;
    bool include_self = false;
    std::optional<double> chunk_mb;
    std::string k_grid;
    std::size_t folds = 10;
    std::string predictions;
    std::string compare;
    std::size_t threads = 0;

    // synth
    std::string kind = "gaussian";
    std::size_t m = 0;
    std::size_t dim = 0;
    double mean = 0.0;
    double d1 = 5.0;
    double d2 = 10.0;
    std::size_t classes = 2;
    double separation = 0.0;
    std::size_t test_m = 0;

    // reproduce-fig2
    std::string dims = "3,20,768";
    std::string self = "include";
};

FileFormat format_for_output(const std::string& path) {
    return fs::path(path).extension() == ".csv" ? FileFormat::csv : FileFormat::binary;
}

EmbeddingSet load_input(const std::string& path, const std::string& labels) {
    if (!fs::exists(path)) {
        throw IoError("input file not found: " + path);
    }
    std::optional<fs::path> label_path;
    if (!labels.empty()) label_path = labels;
    return load_embeddings(path, detect_format(path), label_path);
}

Pipeline load_pipeline(const Options& o) {
    if (o.pipeline.empty()) return {};
    std::string text = o.pipeline;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] != '[' && fs::exists(text)) {
        std::ifstream in(text);
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return parse_pipeline(text, o.seed);
}

SampleSize parse_sample_size(const std::string& text) {
    if (text == "auto") return SampleSize::automatic();
    if (text == "all") return SampleSize::all();
    std::size_t pos = 0;
    unsigned long long n = 0;
    try {
        n = std::stoull(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != text.size() || text.empty()) {
        throw InvalidArgument("--mp-sample-size must be a count, 'all' or 'auto'");
    }
    return SampleSize::of(n);
}

SecondaryParams secondary_params(const Options& o) {
    SecondaryParams p;
    p.mp_sample_size = parse_sample_size(o.mp_sample_size);
    p.ls_m = o.ls_m;
    p.seed = o.seed;
    return p;
}

std::vector<std::size_t> parse_counts(const std::string& text, const char* what) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const auto v = std::stoull(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw InvalidArgument(std::string("cannot parse ") + what + " entry '" + item + "'");
        }
    }
    if (out.empty()) {
        throw InvalidArgument(std::string(what) + " is empty");
    }
    return out;
}

json secondary_json(DistanceMode mode, const Options& o) {
    json j = {{"mode", std::string(to_string(mode))}};
    if (mode == DistanceMode::mp) j["mp_sample_size"] = o.mp_sample_size;
    if (mode == DistanceMode::ls) j["ls_m"] = o.ls_m;
    return j;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
    } else {
        write_text(path, text);
    }
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    return path + suffix;
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream& err) {
    EmbeddingSet X = load_input(o.input, o.labels);
    if (X.rows() > kLargeInputRows && !o.chunk_mb) {
        err << "error: " << X.rows() << " rows exceeds " << kLargeInputRows
            << "; exact search is quadratic, pass --chunk-mb to proceed\n";
        return kUsageError;
    }
    for (const Finding& f : validate(X)) {
        err << "warning: " << to_string(f.kind) << ": " << f.message << "\n";
    }
    const Pipeline pipeline = load_pipeline(o);
    X = apply_pipeline(X, pipeline);

    const SelfMatch self = o.include_self ? SelfMatch::include : SelfMatch::exclude;
    const DistanceMode mode = parse_distance_mode(o.secondary);
    NeighborGraph graph;
    if (mode == DistanceMode::primary) {
        graph = self == SelfMatch::exclude ? knn_search(X, o.k) : knn_search(X, X, o.k, false);
    } else {
        const SecondaryModel model = fit_distance(X, nullptr, mode, secondary_params(o)).model.value();
        graph = secondary_knn(X, model, X, model, o.k, self == SelfMatch::exclude);
    }
    const HubnessReport report = hubness_report(graph, X.rows());

    if (!o.histogram.empty()) {
        write_text(o.histogram, k_occurrence_csv(k_occurrence(graph, X.rows())));
    }
    if (o.format == "csv") {
        std::ostringstream csv;
        csv << std::setprecision(17)
            << "k,n_points,k_skewness,robinhood,antihub_count,max_k_occurrence\n"
            << report.k << "," << report.n_points << "," << report.k_skewness << ","
            << report.robinhood << "," << report.antihub_count << "," << report.max_k_occurrence
            << "\n";
        emit(o.out, csv.str(), out);
    } else {
        json j = to_json(report);
        j["seed"] = o.seed;
        j["self_match"] = self == SelfMatch::include ? "include" : "exclude";
        j["secondary"] = secondary_json(mode, o);
        j["transform_pipeline"] = to_json(pipeline);
        if (o.chunk_mb) j["chunk_mb"] = *o.chunk_mb;
        emit(o.out, j.dump(2) + "\n", out);
    }
    return kOk;
}

int cmd_reduce(const Options& o, std::ostream& out, std::ostream&) {
    if (o.pipeline.empty()) {
        throw InvalidArgument("reduce needs --pipeline");
    }
    if (!o.test_out.empty() && o.test_input.empty()) {
        throw InvalidArgument("--test-out given without --test-input");
    }
    const Pipeline pipeline = load_pipeline(o);
    std::optional<EmbeddingSet> test;
    EmbeddingSet train = load_input(o.input, o.labels);
    if (!o.test_input.empty()) test = load_input(o.test_input, o.test_labels);
    const DatasetSplit result = apply_pipeline(DatasetSplit(std::move(train), std::move(test)), pipeline);

    json provenance = {
        {"command", "reduce"},
        {"format_version", "EMB1"},
        {"seed", o.seed},
        {"transform_pipeline", to_json(pipeline)},
        {"input", o.input},
        {"outputs", {{"train", o.out}}},
    };
    save_embeddings(result.train, o.out, format_for_output(o.out));
    if (result.test) {
        const std::string test_out = o.test_out.empty() ? with_suffix(o.out, ".test") : o.test_out;
        save_embeddings(*result.test, test_out, format_for_output(test_out));
        provenance["test_input"] = o.test_input;
        provenance["outputs"]["test"] = test_out;
    }

    const DistanceMode mode = parse_distance_mode(o.secondary);
    if (mode != DistanceMode::primary) {
        const EmbeddingSet* test_ptr = result.test ? &*result.test : nullptr;
        const DistanceSetup setup = fit_distance(result.train, test_ptr, mode, secondary_params(o));
        const std::string model_out = with_suffix(o.out, mode == DistanceMode::mp ? ".mpm" : ".lsm");
        save_model(*setup.model, model_out);
        provenance["secondary"] = secondary_json(mode, o);
        provenance["secondary"]["model_rows"] = "train followed by test";
        provenance["outputs"]["model"] = model_out;
    }
    write_text(with_suffix(o.out, ".provenance.json"), provenance.dump(2) + "\n");
    out << provenance.dump(2) << "\n";
    return kOk;
}

int cmd_knn_eval(const Options& o, std::ostream& out, std::ostream&) {
    if (o.labels.empty() || o.test_labels.empty()) {
        throw InvalidArgument("knn-eval needs --labels and --test-labels");
    }
    if (o.test_input.empty()) {
        throw InvalidArgument("knn-eval needs --test-input");
    }
    const Pipeline pipeline = load_pipeline(o);
    EmbeddingSet train = load_input(o.input, o.labels);
    EmbeddingSet test = load_input(o.test_input, o.test_labels);
    const DatasetSplit split = apply_pipeline(DatasetSplit(std::move(train), std::move(test)), pipeline);

    EvalOptions options;
    if (!o.k_grid.empty()) options.candidates = parse_counts(o.k_grid, "--k-grid");
    options.n_folds = o.folds;
    options.seed = o.seed;
    options.mode = parse_distance_mode(o.secondary);
    options.secondary = secondary_params(o);
    const EvalResult result = evaluate(split.train, *split.test, options);

    json j = to_json(result, pipeline);
    j["seed"] = o.seed;
    j["n_folds"] = o.folds;
    j["candidates"] = result.selection.candidates;
    j["mean_validation_errors"] = result.selection.mean_errors;
    if (!o.predictions.empty()) write_predictions_csv(result.predictions, o.predictions);
    if (!o.compare.empty()) {
        const std::vector<int> baseline = read_predictions_csv(o.compare);
        j["mcnemar"] = to_json(mcnemar(result.predictions, baseline, *split.test->labels()));
        j["mcnemar"]["baseline"] = o.compare;
    }
    emit(o.out, j.dump(2) + "\n", out);
    return kOk;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
    if (o.out.empty()) {
        throw InvalidArgument("synth needs --out");
    }
    GenSpec spec;
    spec.kind = parse_gen_kind(o.kind);
    spec.m = o.m;
    spec.dim = o.dim;
    spec.mean = o.mean;
    spec.d1 = o.d1;
    spec.d2 = o.d2;
    spec.classes = o.classes;
    spec.separation = o.separation;
    spec.seed = o.seed;
    save_embeddings(generate(spec), o.out, format_for_output(o.out));
    json summary = {{"kind", o.kind}, {"m", o.m}, {"dim", o.dim}, {"seed", o.seed}, {"out", o.out}};
    if (o.test_m > 0) {
        GenSpec test_spec = spec;
        test_spec.m = o.test_m;
        test_spec.seed = mix_seed(o.seed, 1);
        const std::string test_out = o.test_out.empty() ? with_suffix(o.out, ".test") : o.test_out;
        save_embeddings(generate(test_spec), test_out, format_for_output(test_out));
        summary["test_out"] = test_out;
        summary["test_m"] = o.test_m;
        summary["test_seed"] = test_spec.seed;
    }
    out << summary.dump(2) << "\n";
    return kOk;
}

int cmd_reproduce_fig2(const Options& o, std::ostream& out, std::ostream&) {
    Fig2Config config;
    if (o.m > 0) config.m = o.m;
    config.dims = parse_counts(o.dims, "--dims");
    config.k = o.k;
    config.seed = o.seed;
    config.d1 = o.d1;
    config.d2 = o.d2;
    if (o.self != "include" && o.self != "exclude") {
        throw InvalidArgument("--self must be include or exclude");
    }
    config.self = o.self == "include" ? SelfMatch::include : SelfMatch::exclude;

    const std::vector<Fig2Row> rows = reproduce_fig2(config);
    std::ostringstream csv;
    csv << std::setprecision(17)
        << "panel,dim,k_skewness,robinhood,target_k_skewness,target_robinhood,within_tolerance\n";
    json table = json::array();
    for (const auto& row : rows) {
        json target_skew = nullptr;
        json target_rh = nullptr;
        json within = nullptr;
        if (row.skewness_target && row.robinhood_target) {
            target_skew = row.skewness_target->value;
            target_rh = row.robinhood_target->value;
            if (row.panel != 'c') {
                within = row.skewness_target->accepts(row.report.k_skewness) &&
                         row.robinhood_target->accepts(row.report.robinhood);
            }
        }
        table.push_back({{"panel", std::string(1, row.panel)},
                         {"dim", row.dim},
                         {"k_skewness", row.report.k_skewness},
                         {"robinhood", row.report.robinhood},
                         {"target_k_skewness", target_skew},
                         {"target_robinhood", target_rh},
                         {"within_tolerance", within}});
        csv << row.panel << "," << row.dim << "," << row.report.k_skewness << ","
            << row.report.robinhood << "," << (target_skew.is_null() ? "" : target_skew.dump())
            << "," << (target_rh.is_null() ? "" : target_rh.dump()) << ","
            << (within.is_null() ? "" : within.dump()) << "\n";
    }
    json j = {{"m", config.m},           {"k", config.k}, {"seed", config.seed},
              {"f_d1", config.d1},       {"f_d2", config.d2},
              {"self_match", o.self},    {"rows", table}};
    if (o.out.empty()) {
        out << csv.str();
    } else {
        write_text(o.out, j.dump(2) + "\n");
        fs::path csv_path = fs::path(o.out).replace_extension(".csv");
        write_text(csv_path, csv.str());
        out << csv.str();
    }
    return kOk;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--seed", o.seed, "Seed for every random step (recorded in outputs)");
    cmd->add_option("--out", o.out, "Output path");
    cmd->add_option("--threads", o.threads, "Worker threads (default: all cores)");
}

void add_inputs(CLI::App* cmd, Options& o, bool require_input) {
    auto* in = cmd->add_option("--input", o.input, "Embeddings (EMB1 binary or CSV)");
    if (require_input) in->required();
    cmd->add_option("--labels", o.labels, "Label sidecar for --input");
    cmd->add_option("--pipeline", o.pipeline, "Transform pipeline JSON (inline or file path)");
}

void add_secondary(CLI::App* cmd, Options& o) {
    cmd->add_option("--secondary", o.secondary, "Secondary distance")
        ->check(CLI::IsMember({"none", "mp", "ls"}));
    cmd->add_option("--mp-sample-size", o.mp_sample_size, "MP reference sample: count, all or auto");
    cmd->add_option("--ls-m", o.ls_m, "Local scaling neighbor rank")->check(CLI::PositiveNumber);
}

} // namespace

bool Fig2Target::accepts(double measured) const {
    const double allowed = relative ? tolerance * std::abs(value) : tolerance;
    return std::abs(measured - value) <= allowed;
}

std::optional<Fig2Target> fig2_skewness_target(char panel, std::size_t dim) {
    const int col = dim == 3 ? 0 : dim == 20 ? 1 : dim == 768 ? 2 : -1;
    if (col < 0) return std::nullopt;
    switch (panel) {
    case 'a': {
        constexpr double v[] = {-0.10, 2.32, 11.62};
        return col == 0 ? Fig2Target{v[0], 0.3, false} : Fig2Target{v[col], 0.2, true};
    }
    case 'b': {
        constexpr double v[] = {0.05, 0.27, 0.37};
        return Fig2Target{v[col], 0.3, false};
    }
    case 'c': {
        constexpr double v[] = {-0.12, 1.78, 19.30};
        return Fig2Target{v[col], 0.0, false};
    }
    case 'd': {
        constexpr double v[] = {0.04, 0.34, 0.34};
        return Fig2Target{v[col], 0.3, false};
    }
    }
    return std::nullopt;
}

std::optional<Fig2Target> fig2_robinhood_target(char panel, std::size_t dim) {
    const int col = dim == 3 ? 0 : dim == 20 ? 1 : dim == 768 ? 2 : -1;
    if (col < 0) return std::nullopt;
    switch (panel) {
    case 'a': {
        constexpr double v[] = {0.09, 0.35, 0.61};
        return Fig2Target{v[col], 0.03, false};
    }
    case 'b': {
        constexpr double v[] = {0.08, 0.11, 0.12};
        return Fig2Target{v[col], 0.03, false};
    }
    case 'c': {
        constexpr double v[] = {0.10, 0.28, 0.74};
        return Fig2Target{v[col], 0.0, false};
    }
    case 'd': {
        // Reference for D=3 is 0.09.
        constexpr double v[] = {0.09, 0.11, 0.12};
        return Fig2Target{v[col], 0.03, false};
    }
    }
    return std::nullopt;
}

std::vector<Fig2Row> reproduce_fig2(const Fig2Config& config) {
    std::vector<Fig2Row> rows;
    auto measure = [&](char panel, std::size_t dim, const EmbeddingSet& X) {
        Fig2Row row;
        row.panel = panel;
        row.dim = dim;
        row.report = hubness_report(X, config.k, config.self);
        row.skewness_target = fig2_skewness_target(panel, dim);
        row.robinhood_target = fig2_robinhood_target(panel, dim);
        rows.push_back(row);
    };
    for (std::size_t dim : config.dims) {
        const EmbeddingSet normal = gen_gaussian(config.m, dim, 0.0, mix_seed(config.seed, 2 * dim));
        measure('a', dim, normal);
        measure('b', dim, unit_normalize(normal));
        const EmbeddingSet f = gen_f_dist(config.m, dim, config.d1, config.d2,
                                          mix_seed(config.seed, 2 * dim + 1));
        measure('c', dim, f);
        measure('d', dim, f_norm(f, mix_seed(config.seed, 1000003 + dim)));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Fig2Row& a, const Fig2Row& b) { return a.panel < b.panel; });
    return rows;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hubness diagnosis, reduction and k-NN evaluation for dense embeddings", "hubness"};
    app.require_subcommand(1);
    Options o;

    auto* analyze = app.add_subcommand("analyze", "Hubness report (k-skewness, robinhood, antihubs)");
    add_inputs(analyze, o, true);
    add_common(analyze, o);
    add_secondary(analyze, o);
    analyze->add_option("--k", o.k, "Neighbors per point")->check(CLI::PositiveNumber);
    analyze->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    analyze->add_option("--histogram", o.histogram, "Write index,count k-occurrence CSV here");
    analyze->add_flag("--include-self", o.include_self, "Let each point count as its own neighbor");
    analyze->add_option("--chunk-mb", o.chunk_mb, "Memory budget; required above 200,000 rows");

    auto* reduce = app.add_subcommand("reduce", "Apply a transform pipeline (and fit MP/LS models)");
    add_inputs(reduce, o, true);
    add_common(reduce, o);
    add_secondary(reduce, o);
    reduce->add_option("--test-input", o.test_input, "Test embeddings, transformed jointly");
    reduce->add_option("--test-labels", o.test_labels, "Label sidecar for --test-input");
    reduce->add_option("--test-out", o.test_out, "Transformed test output path");
    reduce->get_option("--out")->required();

    auto* eval = app.add_subcommand("knn-eval", "Cross-validated k selection and test error");
    add_inputs(eval, o, true);
    add_common(eval, o);
    add_secondary(eval, o);
    eval->add_option("--test-input", o.test_input, "Test embeddings")->required();
    eval->add_option("--test-labels", o.test_labels, "Label sidecar for --test-input");
    eval->add_option("--k-grid", o.k_grid, "Comma-separated candidate k values");
    eval->add_option("--folds", o.folds, "Cross-validation folds")->check(CLI::Range(2, 1000000));
    eval->add_option("--predictions", o.predictions, "Write row_index,predicted_label CSV here");
    eval->add_option("--compare", o.compare, "Baseline predictions CSV for a McNemar test");
    eval->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json"}));

    auto* synth = app.add_subcommand("synth", "Generate synthetic embeddings");
    add_common(synth, o);
    synth->add_option("--kind", o.kind, "gaussian, shifted_gaussian, uniform, f_dist, labeled_mixture");
    synth->add_option("--m", o.m, "Rows")->required();
    synth->add_option("--dim", o.dim, "Dimensions")->required();
    synth->add_option("--mean", o.mean, "Per-coordinate mean (shifted_gaussian)");
    synth->add_option("--d1", o.d1, "F numerator degrees of freedom");
    synth->add_option("--d2", o.d2, "F denominator degrees of freedom");
    synth->add_option("--classes", o.classes, "Mixture classes");
    synth->add_option("--separation", o.separation, "Mixture center distance");
    synth->add_option("--test-m", o.test_m, "Also generate a test set of this size");
    synth->add_option("--test-out", o.test_out, "Test set output path");

    auto* fig2 = app.add_subcommand("reproduce-fig2", "Synthetic hubness panels vs reference values");
    add_common(fig2, o);
    fig2->add_option("--m", o.m, "Points per panel (default 10000)");
    fig2->add_option("--dims", o.dims, "Comma-separated dimensions");
    fig2->add_option("--k", o.k, "Neighbors per point")->check(CLI::PositiveNumber);
    fig2->add_option("--d1", o.d1, "F numerator degrees of freedom");
    fig2->add_option("--d2", o.d2, "F denominator degrees of freedom");
    fig2->add_option("--self", o.self, "include or exclude self matches")
        ->check(CLI::IsMember({"include", "exclude"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    if (o.threads > 0) set_num_threads(o.threads);
    try {
        if (analyze->parsed()) return cmd_analyze(o, out, err);
        if (reduce->parsed()) return cmd_reduce(o, out, err);
        if (eval->parsed()) return cmd_knn_eval(o, out, err);
        if (synth->parsed()) return cmd_synth(o, out, err);
        if (fig2->parsed()) return cmd_reproduce_fig2(o, out, err);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kUsageError;
}

} // namespace hubness::cli
