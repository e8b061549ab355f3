#include "fcr/discovery.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "fcr/csv.hpp"
#include "fcr/error.hpp"
#include "fcr/similarity.hpp"

namespace fcr {

namespace {

const std::set<std::string>& stopwords() {
    static const std::set<std::string> words = {
        "a",     "about", "above",  "after",  "again", "all",   "also",  "an",    "and",   "any",   "are",
        "as",    "at",    "be",     "because", "been", "before", "being", "below", "between", "both", "but",
        "by",    "can",   "could",  "did",    "do",    "does",  "each",  "either", "eq",   "equation", "for",
        "from",  "further", "given", "had",   "has",   "have",  "having", "here", "hence", "how",   "if",
        "in",    "into",  "is",     "it",     "its",   "itself", "let",  "may",   "more",  "most",  "must",
        "no",    "nor",   "not",    "now",    "of",    "on",    "one",   "only",  "or",    "other", "our",
        "out",   "over",  "same",   "see",    "shall", "should", "since", "so",   "some",  "such",  "than",
        "that",  "the",   "their",  "them",   "then",  "there", "thus",  "these", "they",  "this",  "those",
        "through", "to",  "two",    "under",  "up",    "upon",  "using", "very",  "via",   "was",   "we",
        "were",  "what",  "when",   "where",  "whereas", "which", "while", "who", "whose", "why",  "will",
        "with",  "within", "would", "yields", "you",   "where", "denotes", "describes", "write", "written",
        "obtain", "get",  "gives",  "given",  "holds", "reads", "becomes", "follows", "following"};
    return words;
}

struct Word {
    std::string text;
    std::size_t begin;
    std::size_t end;
};

// Lowercased alphabetic words; `break_before` marks words that do not
// continue a phrase (a stopword, punctuation or a formula came in between).
std::vector<Word> words_of(std::string_view text, std::size_t base, std::vector<bool>& break_before) {
    std::vector<Word> words;
    bool broken = true;
    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (!std::isalpha(c)) {
            if (!std::isspace(c) && c != '-') broken = true;
            ++i;
            continue;
        }
        const std::size_t start = i;
        std::string w;
        while (i < text.size() && (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '-')) {
            w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
            ++i;
        }
        while (!w.empty() && w.back() == '-') w.pop_back();
        if (w.size() < 2 || stopwords().count(w) > 0) {
            broken = true;
            continue;
        }
        words.push_back({w, base + start, base + i});
        break_before.push_back(broken);
        broken = false;
    }
    return words;
}

std::size_t distance_to(std::size_t begin, std::size_t end, std::size_t offset) {
    if (offset < begin) return begin - offset;
    if (offset > end) return offset - end;
    return 0;
}

std::set<std::string> canonical_duplicates(std::span<const Formula> corpus, const std::string& query) {
    std::set<std::string> out;
    const auto it = std::find_if(corpus.begin(), corpus.end(), [&](const Formula& f) { return f.id == query; });
    if (it == corpus.end()) return out;
    const auto key = canonical_latex(it->latex);
    for (const auto& f : corpus) {
        if (f.id != query && canonical_latex(f.latex) == key) out.insert(f.id);
    }
    return out;
}

std::size_t kind_index(EncodingKind kind) {
    const auto& kinds = all_encoding_kinds();
    return static_cast<std::size_t>(std::find(kinds.begin(), kinds.end(), kind) - kinds.begin());
}

} // namespace

std::vector<DuplicateRecord> rank_duplicates(std::span<const Formula> corpus, const KnnConfig& config) {
    config.validate();
    struct Group {
        std::size_t count = 0;
        std::set<std::string> documents;
        std::string first_id;
    };
    std::map<std::string, Group> groups;
    for (const auto& f : corpus) {
        auto& g = groups[canonical_latex(f.latex)];
        if (g.count++ == 0) g.first_id = f.id;
        g.documents.insert(f.doc_id);
    }
    std::vector<DuplicateRecord> out;
    for (auto& [latex, g] : groups) {
        if (latex.size() < config.min_len || latex.size() > config.max_len) continue;
        if (g.documents.size() < config.min_docs) continue;
        out.push_back({latex, g.count, g.documents.size(), g.first_id});
    }
    std::sort(out.begin(), out.end(), [](const DuplicateRecord& a, const DuplicateRecord& b) {
        if (a.count != b.count) return a.count > b.count;
        if (a.documents != b.documents) return a.documents > b.documents;
        return a.latex < b.latex;
    });
    return out;
}

bool is_equation(std::string_view latex) {
    const auto canonical = canonical_latex(latex);
    const auto eq = canonical.find('=');
    if (eq == std::string::npos) return false;
    const std::string lhs = canonical.substr(0, eq);
    const std::string rhs = canonical.substr(eq + 1);
    if (lhs.empty() || rhs.empty() || lhs == rhs) return false;
    auto lone_identifier = [](const std::string& side) {
        try {
            const auto cs = tokenize_latex(side);
            return cs.tokens.size() == 1 && cs.tokens[0].kind == TokenKind::Identifier;
        } catch (const Error&) {
            return false;
        }
    };
    return !(lone_identifier(lhs) && lone_identifier(rhs));
}

std::vector<Neighbor> knn_candidates(const EncodingSpace& space, const std::string& query, std::size_t k,
                                     std::span<const Formula> corpus) {
    if (k == 0) throw Error(ErrorCode::InvalidConfig, "k must be at least 1");
    const auto& q = space.vector_of(query);
    const auto skip = canonical_duplicates(corpus, query);
    std::vector<Neighbor> all;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& id = space.ids[i];
        if (id == query || skip.count(id) > 0) continue;
        all.push_back({id, 1.0 - cosine(q, space.vectors[i])});
    }
    const std::size_t keep = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                      [](const Neighbor& a, const Neighbor& b) {
                          if (a.distance != b.distance) return a.distance < b.distance;
                          return a.id < b.id;
                      });
    all.resize(keep);
    return all;
}

std::array<double, 4> attribute_success(const std::array<std::size_t, 4>& accepted_found) {
    std::array<double, 4> s{};
    std::size_t total = 0;
    for (auto n : accepted_found) total += n;
    if (total == 0) return s;
    for (std::size_t e = 0; e < 4; ++e) s[e] = static_cast<double>(accepted_found[e]) / static_cast<double>(total);
    return s;
}

std::vector<std::string> extract_name_candidates(std::string_view context, std::size_t offset, std::size_t window,
                                                 std::size_t top_n) {
    if (context.empty() || top_n == 0) return {};
    offset = std::min(offset, context.size());
    const std::size_t begin = offset > window ? offset - window : 0;
    const std::size_t end = std::min(context.size(), offset + window);

    std::vector<bool> break_before;
    const auto words = words_of(context.substr(begin, end - begin), begin, break_before);

    struct Stats {
        std::size_t count = 0;
        std::size_t nearest = static_cast<std::size_t>(-1);
        std::size_t length = 1;
    };
    std::map<std::string, Stats> stats;
    auto record = [&](const std::string& text, std::size_t b, std::size_t e, std::size_t length) {
        auto& s = stats[text];
        ++s.count;
        s.nearest = std::min(s.nearest, distance_to(b, e, offset));
        s.length = length;
    };
    for (std::size_t i = 0; i < words.size(); ++i) {
        record(words[i].text, words[i].begin, words[i].end, 1);
        if (i > 0 && !break_before[i]) {
            record(words[i - 1].text + " " + words[i].text, words[i - 1].begin, words[i].end, 2);
        }
    }

    std::vector<std::pair<std::string, Stats>> ranked(stats.begin(), stats.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second.count != b.second.count) return a.second.count > b.second.count;
        if (a.second.nearest != b.second.nearest) return a.second.nearest < b.second.nearest;
        if (a.second.length != b.second.length) return a.second.length > b.second.length;
        return a.first < b.first;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ranked.size() && i < top_n; ++i) out.push_back(ranked[i].first);
    return out;
}

Judgments judgments_from_labels(std::span<const Formula> corpus) {
    Judgments j;
    for (const auto& f : corpus) {
        if (!f.label) continue;
        auto& accepted = j[f.id];
        for (const auto& g : corpus) {
            if (g.id != f.id && g.label == f.label) accepted.insert(g.id);
        }
    }
    return j;
}

std::vector<KnnResult> discover(std::span<const Formula> corpus, const AnnotationMap& annotations,
                                const Judgments& judgments, const DiscoveryOptions& options) {
    options.config.validate();
    std::vector<DuplicateRecord> seeds;
    if (options.seed_all) {
        for (const auto& f : corpus) {
            std::set<std::string> docs;
            std::size_t d = 0;
            const auto key = canonical_latex(f.latex);
            for (const auto& g : corpus) {
                if (canonical_latex(g.latex) == key) {
                    ++d;
                    docs.insert(g.doc_id);
                }
            }
            seeds.push_back({key, d, docs.size(), f.id});
        }
    } else {
        seeds = rank_duplicates(corpus, options.config);
    }
    if (options.equations_only) {
        std::erase_if(seeds, [](const DuplicateRecord& r) { return !is_equation(r.latex); });
    }

    std::map<EncodingKind, EncodingSpace> spaces;
    for (const auto& kind : all_encoding_kinds()) {
        try {
            spaces.emplace(kind, build_encoding_space(corpus, annotations, kind, options.encoding));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::MissingAnnotation) throw;
        }
    }

    std::map<std::string, const Formula*> by_id;
    for (const auto& f : corpus) by_id[f.id] = &f;

    std::vector<KnnResult> results;
    for (const auto& seed : seeds) {
        KnnResult r;
        r.query = seed.first_id;
        r.record = seed;
        const auto judged = judgments.find(r.query);
        std::array<std::size_t, 4> found{};
        for (const auto& [kind, space] : spaces) {
            auto neighbors = knn_candidates(space, r.query, options.config.k, corpus);
            if (judged != judgments.end()) {
                for (const auto& n : neighbors) {
                    if (judged->second.count(n.id) > 0) {
                        ++found[kind_index(kind)];
                        r.accepted.insert(n.id);
                    }
                }
            }
            r.neighbors.emplace(kind, std::move(neighbors));
        }
        r.success = attribute_success(found);
        const Formula& f = *by_id.at(r.query);
        if (f.context) {
            const std::size_t offset = f.context_offset.value_or(f.context->size() / 2);
            r.names = extract_name_candidates(*f.context, offset, options.config.context_window, options.top_names);
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::string discovery_csv(std::span<const KnnResult> results, std::span<const Formula> corpus) {
    std::map<std::string, std::string> latex_of;
    for (const auto& f : corpus) latex_of[f.id] = f.latex;

    std::ostringstream out;
    out.precision(4);
    out << "formula,name_candidate,d,D";
    for (const auto& kind : all_encoding_kinds()) out << ",s_" << to_string(kind);
    out << ",sample_neighbor\n";
    for (const auto& r : results) {
        std::string sample;
        for (const auto& kind : all_encoding_kinds()) {
            auto it = r.neighbors.find(kind);
            if (it == r.neighbors.end()) continue;
            for (const auto& n : it->second) {
                if (r.accepted.count(n.id) > 0) {
                    sample = latex_of[n.id];
                    break;
                }
            }
            if (!sample.empty()) break;
        }
        out << csv_field(r.record.latex) << ',' << csv_field(r.names.empty() ? "" : r.names.front()) << ','
            << r.record.count << ',' << r.record.documents;
        for (double s : r.success) out << ',' << s;
        out << ',' << csv_field(sample) << '\n';
    }
    return out.str();
}

} // namespace fcr
