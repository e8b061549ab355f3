#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "fcr/csv.hpp"
#include "fcr/discovery.hpp"
#include "fcr/error.hpp"
#include "fcr/io.hpp"
#include "fcr/learn.hpp"
#include "fcr/model_io.hpp"
#include "fcr/qid_cache.hpp"
#include "fcr/search.hpp"
#include "fcr/serialize.hpp"
#include "fcr/similarity.hpp"

using namespace fcr;

namespace {

struct Globals {
    bool offline = false;
    std::string cache_dir;
    std::string out;
};

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
    } else {
        write_file(g.out, text);
    }
}

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

AnnotationMap annotations_from(const std::string& path) { return path.empty() ? AnnotationMap{} : load_annotations(path); }

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<Formula> only_classes(std::vector<Formula> corpus, const std::string& classes) {
    if (classes.empty()) return corpus;
    const auto wanted = split_list(classes);
    std::erase_if(corpus, [&](const Formula& f) {
        return !f.label || std::find(wanted.begin(), wanted.end(), *f.label) == wanted.end();
    });
    if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "no formula carries one of the labels " + classes);
    return corpus;
}

std::vector<std::string> labels_of(const std::vector<Formula>& corpus) {
    std::vector<std::string> out;
    for (const auto& f : corpus) {
        if (!f.label) throw Error(ErrorCode::InvalidConfig, "formula '" + f.id + "' has no class label");
        out.push_back(*f.label);
    }
    return out;
}

EncodingKind kind_from(const std::string& name) {
    if (auto k = parse_encoding_kind(name)) return *k;
    throw Error(ErrorCode::InvalidConfig, "unknown encoding '" + name + "'");
}

std::vector<EncodingKind> kinds_from(const std::string& list) {
    if (list.empty()) return all_encoding_kinds();
    std::vector<EncodingKind> out;
    for (const auto& name : split_list(list)) out.push_back(kind_from(name));
    return out;
}

// Spaces for `kinds`; semantics spaces are dropped with a warning when
// annotations are incomplete, unless that leaves nothing.
std::vector<EncodingSpace> spaces_for(const std::vector<Formula>& corpus, const AnnotationMap& annotations,
                                      const std::vector<EncodingKind>& kinds, const EncodingOptions& options) {
    std::vector<EncodingSpace> spaces;
    for (const auto& kind : kinds) {
        try {
            spaces.push_back(build_encoding_space(corpus, annotations, kind, options));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::MissingAnnotation || kinds.size() == 1) throw;
            warn("skipping " + to_string(kind) + ": " + e.what());
        }
    }
    return spaces;
}

struct EncodingFlags {
    std::uint64_t seed = 42;
    std::string content_view = "set";
    std::size_t dim = EmbeddingParams{}.dim;
    std::size_t epochs = EmbeddingParams{}.epochs;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
        cmd->add_option("--content-view", content_view, "Content documents as a set or multiset of constituents")
            ->check(CLI::IsMember({"set", "multiset"}))
            ->capture_default_str();
        cmd->add_option("--dim", dim, "Embedding dimension")->capture_default_str();
        cmd->add_option("--epochs", epochs, "Embedding training epochs")->capture_default_str();
    }

    EncodingOptions options() const {
        EncodingOptions o;
        o.seed = seed;
        o.content_view = content_view == "set" ? ContentView::Set : ContentView::Multiset;
        o.embedding.dim = dim;
        o.embedding.epochs = epochs;
        o.embedding.infer_epochs = epochs;
        return o;
    }
};

Json constituents_json(const ConstituentSet& cs) {
    return Json{{"operators", cs.operators()}, {"identifiers", cs.identifiers()}, {"numbers", cs.numbers()}};
}

// -- subcommands --------------------------------------------------------------

void run_parse(const Globals& g, const std::string& in, const std::string& format) {
    const auto text = read_file(in);
    std::string out;
    if (format == "latex") {
        std::istringstream lines(text);
        std::string line;
        std::size_t number = 0;
        while (std::getline(lines, line)) {
            ++number;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            if (line.back() == '\r') line.pop_back();
            std::vector<std::string> warnings;
            auto j = constituents_json(tokenize_latex(line, TokenClassTable::builtin(), &warnings));
            for (const auto& w : warnings) warn("line " + std::to_string(number) + ": " + w);
            j["line"] = number;
            j["latex"] = line;
            out += j.dump() + "\n";
        }
    } else {
        const auto formulas = ingest_document(text, std::filesystem::path(in).stem().string());
        if (formulas.empty()) throw Error(ErrorCode::NotMathML, in + " contains no <math> element");
        for (const auto& f : formulas) {
            auto j = constituents_json(*f.constituents);
            j["id"] = f.id;
            j["latex"] = f.latex;
            out += j.dump() + "\n";
        }
    }
    emit(g, out);
}

void run_encode(const Globals& g, const std::string& corpus_path, const std::string& annotations_path,
                const std::string& kind, const EncodingFlags& flags) {
    const auto corpus = load_corpus(corpus_path);
    const auto space = build_encoding_space(corpus, annotations_from(annotations_path), kind_from(kind), flags.options());
    emit(g, encoding_space_to_json(space).dump() + "\n");
}

struct DiscoverFlags {
    KnnConfig config;
    std::string annotations;
    std::string judgments;
    bool seed_all = false;
    bool equations_only = false;
    std::size_t top_names = 5;
};

void run_discover(const Globals& g, const std::string& corpus_path, const DiscoverFlags& d, const EncodingFlags& e) {
    const auto corpus = load_corpus(corpus_path);
    const auto judgments = d.judgments.empty() ? judgments_from_labels(corpus) : parse_judgments(read_file(d.judgments));
    DiscoveryOptions options;
    options.config = d.config;
    options.encoding = e.options();
    options.seed_all = d.seed_all;
    options.equations_only = d.equations_only;
    options.top_names = d.top_names;
    const auto annotations = annotations_from(d.annotations);
    if (annotations.empty()) warn("no annotations given; semantics encodings are skipped");
    const auto results = discover(corpus, annotations, judgments, options);
    emit(g, discovery_csv(results, corpus));
}

struct SearchFlags {
    std::string queries;
    std::string mode = "latex";
    std::size_t topk = 10;
    std::string relevance;
    std::string report;
};

void run_search(const Globals& g, const std::string& corpus_path, const SearchFlags& s) {
    const auto corpus = load_corpus(corpus_path);
    const auto queries = load_corpus(s.queries);
    const auto index = build_index(corpus);
    std::map<std::string, std::vector<std::string>> relevance;
    if (!s.relevance.empty()) relevance = parse_id_lists(read_file(s.relevance));

    std::ostringstream results;
    results.precision(17);
    results << "query,rank,id,score\n";
    std::vector<std::optional<int>> ranks;
    for (const auto& q : queries) {
        const auto hits = s.mode == "latex" ? query_by_latex(index, q.latex, s.topk)
                                            : query_by_constituents(index, constituents_of(q), s.topk);
        for (std::size_t i = 0; i < hits.size(); ++i) {
            results << csv_field(q.id) << ',' << i + 1 << ',' << csv_field(hits[i].id) << ',' << hits[i].score << '\n';
        }
        std::vector<std::string> relevant;
        if (auto it = relevance.find(q.id); it != relevance.end()) {
            relevant = it->second;
        } else if (q.label) {
            for (const auto& f : corpus) {
                if (f.label == q.label && f.id != q.id) relevant.push_back(f.id);
            }
        }
        if (relevant.empty()) {
            warn("query '" + q.id + "' has no relevant formulas and is not scored");
            continue;
        }
        ranks.push_back(first_relevant_rank(hits, relevant));
    }
    const std::vector<int> ks{1, 10};
    const auto report = ranking_report_csv(ranking_metrics(ranks, ks));
    if (s.report.empty()) {
        emit(g, results.str() + "\n" + report);
    } else {
        emit(g, results.str());
        write_file(s.report, report);
    }
}

void run_classify(const Globals& g, const std::string& corpus_path, const std::string& annotations_path, int folds,
                  const std::string& kinds, const std::string& classes, const EncodingFlags& e) {
    const auto corpus = only_classes(load_corpus(corpus_path), classes);
    const auto labels = labels_of(corpus);
    const auto spaces = spaces_for(corpus, annotations_from(annotations_path), kinds_from(kinds), e.options());
    std::ostringstream out;
    out.precision(6);
    out << "encoding,folds,accuracy\n";
    for (const auto& space : spaces) {
        out << to_string(space.kind) << ',' << folds << ',' << cross_validate(space.vectors, labels, folds, e.seed)
            << '\n';
    }
    emit(g, out.str());
}

void run_cluster(const Globals& g, const std::string& corpus_path, const std::string& annotations_path, int k,
                 const std::string& kind, const std::string& classes, const std::string& points_path,
                 const EncodingFlags& e) {
    const auto corpus = only_classes(load_corpus(corpus_path), classes);
    const auto space = build_encoding_space(corpus, annotations_from(annotations_path), kind_from(kind), e.options());
    auto report = kmeans(space.vectors, k, e.seed);
    const auto points = pca2(space.vectors);
    if (k >= 2) report.mean_centroid_distance = centroid_mean_distance(points, report.assignments);

    Json j = report;
    j["kind"] = to_string(space.kind);
    Json by_id = Json::object();
    for (std::size_t i = 0; i < corpus.size(); ++i) by_id[corpus[i].id] = report.assignments[i];
    j["cluster_of"] = by_id;
    const bool labelled = std::all_of(corpus.begin(), corpus.end(), [](const Formula& f) { return f.label.has_value(); });
    if (labelled) {
        const auto labels = labels_of(corpus);
        report.purity = purity(report.assignments, labels);
        j["purity"] = report.purity;
        j["majority_consistent"] = majority_consistent(report.assignments, labels);
    } else {
        j["purity"] = nullptr;
    }
    emit(g, j.dump(2) + "\n");

    if (!points_path.empty()) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "id,label,cluster,pc1,pc2\n";
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            csv << csv_field(corpus[i].id) << ',' << csv_field(corpus[i].label.value_or("")) << ','
                << report.assignments[i] << ',' << points[i][0] << ',' << points[i][1] << '\n';
        }
        write_file(points_path, csv.str());
    }
}

struct SimmapFlags {
    std::string measure = "fuzzy";
    std::string annotations;
    std::string axis = "content";
    std::string classes;
    bool pool = false;
    bool sort = false;
};

void run_simmap(const Globals& g, const std::string& corpus_path, const SimmapFlags& s, const EncodingFlags& e) {
    const auto corpus = only_classes(load_corpus(corpus_path), s.classes);
    const auto measure = parse_measure(s.measure);
    if (!measure) throw Error(ErrorCode::InvalidConfig, "unknown measure '" + s.measure + "'");
    const auto annotations = annotations_from(s.annotations);
    const Axis axis = s.axis == "content" ? Axis::Content : Axis::Semantics;

    std::optional<EncodingSpace> space;
    if (*measure == Measure::CosineTfidf) space = build_encoding_space(corpus, annotations, {axis, Method::Tfidf}, e.options());
    if (*measure == Measure::CosineEmbedding) {
        space = build_encoding_space(corpus, annotations, {axis, Method::Embedding}, e.options());
    }
    SimilarityInputs inputs;
    inputs.annotations = &annotations;
    inputs.space = space ? &*space : nullptr;

    auto m = similarity_matrix(corpus, *measure, inputs);
    if (s.pool) m = class_pooled_matrix(m, labels_of(corpus));
    if (s.sort) m = sort_matrix(m);
    emit(g, matrix_to_csv(m));
}

void run_sweep(const Globals& g, const std::string& corpus_path, const std::string& annotations_path, int n_min,
               int n_max, const std::string& kinds, const EncodingFlags& e) {
    const auto corpus = load_corpus(corpus_path);
    const auto spaces = spaces_for(corpus, annotations_from(annotations_path), kinds_from(kinds), e.options());
    emit(g, subset_evaluation_csv(subset_evaluation(corpus, spaces, n_min, n_max, e.seed)));
}

void run_label(const Globals& g, const std::vector<std::string>& qids) {
    if (g.cache_dir.empty()) throw Error(ErrorCode::InvalidConfig, "--cache-dir is required for label lookups");
    QidCache cache(g.cache_dir, g.offline, g.offline ? nullptr : std::make_shared<WikidataFetcher>());
    std::string out;
    for (const auto& qid : qids) out += qid + "\t" + cache.label(qid) + "\n";
    emit(g, out);
}

int exit_code(const Error& e) {
    switch (category(e.code())) {
    case ErrorCategory::InputFormat: return 2;
    case ErrorCategory::Precondition: return 3;
    case ErrorCategory::OfflineMiss: return 4;
    case ErrorCategory::Runtime: return 1;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Formula concept retrieval: tokenize, encode, cluster, classify and search formulas"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    if (const char* env = std::getenv("FCR_CACHE_DIR")) g.cache_dir = env;
    app.add_flag("--offline", g.offline, "Never contact the knowledge base; uncached lookups fail");
    app.add_option("--cache-dir", g.cache_dir, "Directory of the QID label cache (default $FCR_CACHE_DIR)");
    app.add_option("--out", g.out, "Write the result to this file instead of stdout");

    std::string corpus, annotations, kind, kinds, classes;
    EncodingFlags enc;

    auto* parse = app.add_subcommand("parse", "Constituents of LaTeX lines or MathML elements, as JSONL");
    std::string in, format = "latex";
    parse->add_option("--in", in, "Input file")->required()->check(CLI::ExistingFile);
    parse->add_option("--format", format, "Input format")->check(CLI::IsMember({"latex", "mathml"}))->capture_default_str();
    parse->callback([&] { run_parse(g, in, format); });

    auto* encode = app.add_subcommand("encode", "Fit an encoding space and write it as JSON");
    encode->add_option("--corpus", corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    encode->add_option("--annotations", annotations, "Annotation TSV")->check(CLI::ExistingFile);
    encode->add_option("--kind", kind, "content-tfidf|content-embed|semantics-tfidf|semantics-embed")->required();
    enc.add_to(encode);
    encode->callback([&] { run_encode(g, corpus, annotations, kind, enc); });

    auto* disc = app.add_subcommand("discover", "Duplicate ranking and kNN formula concept discovery");
    DiscoverFlags d;
    disc->add_option("--corpus", corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    disc->add_option("--annotations", d.annotations, "Annotation TSV (enables the semantics encodings)");
    disc->add_option("--k", d.config.k, "Neighbors per encoding")->capture_default_str();
    disc->add_option("--window", d.config.context_window, "Context characters on each side")->capture_default_str();
    disc->add_option("--min-len", d.config.min_len, "Shortest formula considered")->capture_default_str();
    disc->add_option("--max-len", d.config.max_len, "Longest formula considered")->capture_default_str();
    disc->add_option("--min-docs", d.config.min_docs, "Fewest documents a duplicate must span")->capture_default_str();
    disc->add_option("--judgments", d.judgments, "JSON {formula id: [accepted ids]}; class labels otherwise");
    disc->add_option("--names", d.top_names, "Name candidates per formula")->capture_default_str();
    disc->add_flag("--seed-all", d.seed_all, "Query every formula, not only ranked duplicates");
    disc->add_flag("--equations-only", d.equations_only, "Keep only formulas with a non-trivial '='");
    enc.add_to(disc);
    disc->callback([&] { run_discover(g, corpus, d, enc); });

    auto* search = app.add_subcommand("search", "Query the corpus by LaTeX string or by constituents");
    SearchFlags s;
    search->add_option("--corpus", corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    search->add_option("--queries", s.queries, "Query formulas, corpus JSONL format")->required()->check(CLI::ExistingFile);
    search->add_option("--mode", s.mode, "Matching mode")->check(CLI::IsMember({"latex", "constituents"}))->capture_default_str();
    search->add_option("--topk", s.topk, "Results per query")->capture_default_str();
    search->add_option("--relevance", s.relevance, "JSON {query id: [relevant ids]}; class labels otherwise");
    search->add_option("--report", s.report, "Write the ranking report CSV here instead of after the results");
    search->callback([&] { run_search(g, corpus, s); });

    auto* classify = app.add_subcommand("classify", "Cross-validated SVM accuracy per encoding");
    int folds = 10;
    classify->add_option("--corpus", corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    classify->add_option("--annotations", annotations, "Annotation TSV")->check(CLI::ExistingFile);
    classify->add_option("--folds", folds, "Cross-validation folds")->capture_default_str();
    classify->add_option("--kinds", kinds, "Comma-separated encodings (default all)");
    classify->add_option("--classes", classes, "Comma-separated labels to keep");
    enc.add_to(classify);
    classify->callback([&] { run_classify(g, corpus, annotations, folds, kinds, classes, enc); });

    auto* cluster = app.add_subcommand("cluster", "k-means clustering with purity and PCA centroid distance");
    int k = 3;
    std::string points;
    kind = "content-tfidf";
    cluster->add_option("--corpus", corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    cluster->add_option("--annotations", annotations, "Annotation TSV")->check(CLI::ExistingFile);
    cluster->add_option("--k", k, "Cluster count")->required();
    cluster->add_option("--kind", kind, "Encoding")->capture_default_str();
    cluster->add_option("--classes", classes, "Comma-separated labels to keep");
    cluster->add_option("--points", points, "Write the 2-D PCA points as CSV");
    enc.add_to(cluster);
    cluster->callback([&] { run_cluster(g, corpus, annotations, k, kind, classes, points, enc); });

    auto* simmap = app.add_subcommand("simmap", "Pairwise similarity matrix as CSV");
    SimmapFlags sm;
    simmap->add_option("--corpus", corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    simmap->add_option("--measure", sm.measure, "fuzzy|cosine-tfidf|cosine-embed|qid")->capture_default_str();
    simmap->add_option("--annotations", sm.annotations, "Annotation TSV (qid measure, semantics axis)");
    simmap->add_option("--axis", sm.axis, "Axis of the cosine measures")
        ->check(CLI::IsMember({"content", "semantics"}))
        ->capture_default_str();
    simmap->add_option("--classes", sm.classes, "Comma-separated labels to keep");
    simmap->add_flag("--pool-classes", sm.pool, "Average over class pairs");
    simmap->add_flag("--sort", sm.sort, "Order rows by descending mean similarity");
    enc.add_to(simmap);
    simmap->callback([&] { run_simmap(g, corpus, sm, enc); });

    auto* sweep = app.add_subcommand("sweep", "Accuracy and purity over every N-class subset");
    int n_min = 3, n_max = 10;
    sweep->add_option("--corpus", corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    sweep->add_option("--annotations", annotations, "Annotation TSV")->check(CLI::ExistingFile);
    sweep->add_option("--n-min", n_min, "Smallest class count")->capture_default_str();
    sweep->add_option("--n-max", n_max, "Largest class count")->capture_default_str();
    sweep->add_option("--kinds", kinds, "Comma-separated encodings (default all)");
    enc.add_to(sweep);
    sweep->callback([&] { run_sweep(g, corpus, annotations, n_min, n_max, kinds, enc); });

    auto* label = app.add_subcommand("label", "Knowledge-base labels of QIDs, through the cache");
    std::vector<std::string> qids;
    label->add_option("qids", qids, "QIDs to look up")->required();
    label->callback([&] { run_label(g, qids); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
