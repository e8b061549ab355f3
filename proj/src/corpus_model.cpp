#include "fcr/corpus_model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "fcr/error.hpp"

namespace fcr {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_alpha(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

std::vector<std::string> dedupe(const std::vector<std::string>& in) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& s : in) {
        if (seen.insert(s).second) out.push_back(s);
    }
    return out;
}

} // namespace

std::string_view to_string(TokenKind kind) noexcept {
    switch (kind) {
    case TokenKind::Operator: return "operator";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Number: return "number";
    }
    return "?";
}

std::vector<std::string> ConstituentSet::of_kind(TokenKind kind) const {
    std::vector<std::string> out;
    for (const auto& t : tokens) {
        if (t.kind == kind) out.push_back(t.text);
    }
    return out;
}

std::vector<std::string> ConstituentSet::unique_operators() const { return dedupe(operators()); }
std::vector<std::string> ConstituentSet::unique_identifiers() const { return dedupe(identifiers()); }
std::vector<std::string> ConstituentSet::unique_numbers() const { return dedupe(numbers()); }

std::vector<std::string> ConstituentSet::content_tokens() const {
    std::vector<std::string> out;
    for (const auto& t : tokens) {
        if (t.kind != TokenKind::Number) out.push_back(t.text);
    }
    return out;
}

std::vector<std::string> ConstituentSet::unique_content_tokens() const { return dedupe(content_tokens()); }

bool ConstituentSet::contains(std::string_view text) const {
    return std::any_of(tokens.begin(), tokens.end(), [&](const Token& t) { return t.text == text; });
}

bool is_qid(std::string_view s) noexcept {
    if (s.size() < 2 || s.front() != 'Q') return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void validate(const Formula& formula) {
    if (formula.id.empty()) throw Error(ErrorCode::InvalidFormula, "formula without id");
    if (std::all_of(formula.latex.begin(), formula.latex.end(), is_space)) {
        throw Error(ErrorCode::InvalidFormula, "formula '" + formula.id + "' has blank latex");
    }
    if (formula.concept_qid && !is_qid(*formula.concept_qid)) {
        throw Error(ErrorCode::InvalidFormula,
                    "formula '" + formula.id + "' has malformed concept QID '" + *formula.concept_qid + "'");
    }
}

std::string canonical_latex(std::string_view latex) {
    // Pass 1: drop \left and \right (but not \leftarrow, \rightarrow, ...).
    std::string stripped;
    stripped.reserve(latex.size());
    for (std::size_t i = 0; i < latex.size();) {
        if (latex[i] == '\\') {
            for (std::string_view word : {std::string_view("\\left"), std::string_view("\\right")}) {
                if (latex.substr(i, word.size()) == word &&
                    (i + word.size() >= latex.size() || !is_alpha(latex[i + word.size()]))) {
                    i += word.size();
                    stripped.push_back(' ');
                    goto next;
                }
            }
            // Keep escaped characters (e.g. "\ ", "\,") together with their backslash.
            stripped.push_back(latex[i++]);
            if (i < latex.size() && !is_alpha(latex[i])) stripped.push_back(latex[i++]);
            continue;
        }
        stripped.push_back(latex[i++]);
    next:;
    }

    // Pass 2: remove whitespace, keeping one space where a control word would
    // otherwise run into a following letter.
    std::string out;
    out.reserve(stripped.size());
    bool in_control_word = false;
    bool pending_space = false;
    for (std::size_t i = 0; i < stripped.size(); ++i) {
        const char c = stripped[i];
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && in_control_word && is_alpha(c)) out.push_back(' ');
        pending_space = false;
        if (c == '\\') {
            out.push_back(c);
            if (i + 1 < stripped.size() && !is_alpha(stripped[i + 1])) {
                out.push_back(stripped[++i]);
                in_control_word = false;
            } else {
                in_control_word = true;
            }
            continue;
        }
        out.push_back(c);
        if (!is_alpha(c)) in_control_word = false;
    }
    return out;
}

void AnnotationMap::add(const std::string& formula_id, const std::string& token, const std::string& name,
                        const std::string& qid) {
    if (!is_qid(qid)) {
        throw Error(ErrorCode::AnnotationFormatError, "malformed QID '" + qid + "' for token '" + token + "'");
    }
    auto& alts = alternatives_[token];
    const auto pos = std::lower_bound(alts.begin(), alts.end(), qid,
                                      [](const Annotation& a, const std::string& q) { return a.qid < q; });
    if (pos == alts.end() || pos->qid != qid) alts.insert(pos, {name, qid});
    resolution_[{formula_id, token}] = Annotation{name, qid};
}

const std::vector<Annotation>& AnnotationMap::alternatives(const std::string& token) const {
    static const std::vector<Annotation> none;
    auto it = alternatives_.find(token);
    return it == alternatives_.end() ? none : it->second;
}

std::optional<std::string> AnnotationMap::resolve(const std::string& formula_id, const std::string& token) const {
    auto it = resolution_.find({formula_id, token});
    if (it == resolution_.end()) return std::nullopt;
    return it->second.qid;
}

bool AnnotationMap::has_formula(const std::string& formula_id) const {
    auto it = resolution_.lower_bound({formula_id, std::string{}});
    return it != resolution_.end() && it->first.first == formula_id;
}

std::vector<std::string> AnnotationMap::resolved_qids(const std::string& formula_id,
                                                      const ConstituentSet& constituents) const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& token : constituents.tokens) {
        auto qid = resolve(formula_id, token.text);
        if (qid && seen.insert(*qid).second) out.push_back(*qid);
    }
    return out;
}

std::vector<std::string> AnnotationMap::dangling_tokens(const std::string& formula_id,
                                                        const ConstituentSet& constituents) const {
    std::vector<std::string> out;
    for (auto it = resolution_.lower_bound({formula_id, std::string{}});
         it != resolution_.end() && it->first.first == formula_id; ++it) {
        if (!constituents.contains(it->first.second)) out.push_back(it->first.second);
    }
    return out;
}

std::string to_string(EncodingKind kind) {
    std::string out = kind.axis == Axis::Content ? "content" : "semantics";
    out += kind.method == Method::Tfidf ? "-tfidf" : "-embed";
    return out;
}

std::optional<EncodingKind> parse_encoding_kind(std::string_view name) {
    for (const auto& kind : all_encoding_kinds()) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

const std::vector<EncodingKind>& all_encoding_kinds() {
    static const std::vector<EncodingKind> kinds = {
        {Axis::Content, Method::Embedding},
        {Axis::Content, Method::Tfidf},
        {Axis::Semantics, Method::Embedding},
        {Axis::Semantics, Method::Tfidf},
    };
    return kinds;
}

void KnnConfig::validate() const {
    if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be at least 1");
    if (min_len > max_len) throw Error(ErrorCode::InvalidConfig, "min_len exceeds max_len");
    if (min_docs < 1) throw Error(ErrorCode::InvalidConfig, "min_docs must be at least 1");
}

std::string_view to_string(Measure measure) noexcept {
    switch (measure) {
    case Measure::Fuzzy: return "fuzzy";
    case Measure::CosineTfidf: return "cosine-tfidf";
    case Measure::CosineEmbedding: return "cosine-embed";
    case Measure::QidOverlap: return "qid";
    }
    return "?";
}

std::optional<Measure> parse_measure(std::string_view name) {
    for (auto m : {Measure::Fuzzy, Measure::CosineTfidf, Measure::CosineEmbedding, Measure::QidOverlap}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

} // namespace fcr
