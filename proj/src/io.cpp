#include "fcr/io.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "fcr/error.hpp"
#include "fcr/mathml.hpp"
#include "fcr/serialize.hpp"
#include "fcr/xml.hpp"

namespace fcr {

namespace fs = std::filesystem;

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return lines;
}

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; });
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    while (true) {
        const auto tab = line.find('\t');
        out.push_back(line.substr(0, tab));
        if (tab == std::string_view::npos) break;
        line.remove_prefix(tab + 1);
    }
    return out;
}

// Move `pos` back to the start of a UTF-8 code point.
std::size_t code_point_floor(std::string_view s, std::size_t pos) {
    while (pos > 0 && pos < s.size() && (static_cast<unsigned char>(s[pos]) & 0xC0) == 0x80) --pos;
    return pos;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

void append_prose(std::string& prose, std::string_view text) {
    for (char c : text) {
        if (is_space(c)) {
            if (!prose.empty() && prose.back() != ' ') prose.push_back(' ');
        } else {
            prose.push_back(c);
        }
    }
}

struct MathSite {
    const xml::Node* node;
    std::size_t prose_pos;
};

void collect(const xml::Node& node, std::string& prose, std::vector<MathSite>& sites) {
    if (node.kind == xml::Node::Kind::Text) {
        append_prose(prose, node.text);
        return;
    }
    if (node.name == "script" || node.name == "style" || node.name == "head") return;
    if (node.name == "math") {
        if (!prose.empty() && prose.back() != ' ') prose.push_back(' ');
        sites.push_back({&node, prose.size()});
        return;
    }
    for (const auto& child : node.children) collect(child, prose, sites);
}

std::string latex_of(const xml::Node& math) {
    if (auto alt = math.attribute("alttext"); alt && !blank(*alt)) return *alt;
    std::function<const xml::Node*(const xml::Node&)> find_tex = [&](const xml::Node& n) -> const xml::Node* {
        if (n.is_element("annotation")) {
            auto enc = n.attribute("encoding");
            if (enc && (*enc == "application/x-tex" || *enc == "application/x-latex")) return &n;
        }
        for (const auto& c : n.children) {
            if (const auto* hit = find_tex(c)) return hit;
        }
        return nullptr;
    };
    if (const auto* tex = find_tex(math)) return tex->text_content();
    std::string text;
    append_prose(text, math.text_content());
    return text;
}

} // namespace

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << contents;
}

std::vector<Formula> parse_corpus(std::string_view jsonl) {
    std::vector<Formula> corpus;
    std::set<std::string> ids;
    std::size_t line_no = 0;
    for (const auto line : split_lines(jsonl)) {
        ++line_no;
        if (blank(line)) continue;
        Formula f;
        try {
            from_json(Json::parse(line), f);
            validate(f);
        } catch (const std::exception& e) {
            throw Error(ErrorCode::CorpusFormatError, "line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!ids.insert(f.id).second) {
            throw Error(ErrorCode::CorpusFormatError,
                        "line " + std::to_string(line_no) + ": duplicate id '" + f.id + "'");
        }
        corpus.push_back(std::move(f));
    }
    return corpus;
}

std::vector<Formula> load_corpus(const fs::path& path) { return parse_corpus(read_file(path)); }

std::string emit_corpus(std::span<const Formula> corpus) {
    std::string out;
    for (const auto& f : corpus) {
        Json j;
        to_json(j, f);
        out += j.dump(-1, ' ', false, Json::error_handler_t::strict);
        out += '\n';
    }
    return out;
}

void save_corpus(const fs::path& path, std::span<const Formula> corpus) { write_file(path, emit_corpus(corpus)); }

AnnotationMap parse_annotations(std::string_view tsv) {
    AnnotationMap map;
    std::size_t line_no = 0;
    for (const auto line : split_lines(tsv)) {
        ++line_no;
        if (blank(line) || line.front() == '#') continue;
        const auto cols = split_tabs(line);
        if (line_no == 1 && cols[0] == "formula_id") continue;
        if (cols.size() != 4) {
            throw Error(ErrorCode::AnnotationFormatError,
                        "line " + std::to_string(line_no) + ": expected 4 tab-separated columns, got " +
                            std::to_string(cols.size()));
        }
        if (cols[0].empty() || cols[1].empty()) {
            throw Error(ErrorCode::AnnotationFormatError, "line " + std::to_string(line_no) + ": empty field");
        }
        if (!is_qid(cols[3])) {
            throw Error(ErrorCode::AnnotationFormatError,
                        "line " + std::to_string(line_no) + ": malformed QID '" + std::string(cols[3]) + "'");
        }
        map.add(std::string(cols[0]), std::string(cols[1]), std::string(cols[2]), std::string(cols[3]));
    }
    return map;
}

AnnotationMap load_annotations(const fs::path& path) { return parse_annotations(read_file(path)); }

std::string emit_annotations(const AnnotationMap& annotations) {
    std::string out = "formula_id\ttoken\tname\tqid\n";
    for (const auto& [key, annotation] : annotations.all_resolutions()) {
        out += key.first + '\t' + key.second + '\t' + annotation.name + '\t' + annotation.qid + '\n';
    }
    return out;
}

std::vector<Formula> ingest_document(std::string_view xhtml, const std::string& doc_id,
                                     const IngestOptions& options) {
    const xml::Node root = xml::parse(xhtml);
    std::string prose;
    std::vector<MathSite> sites;
    collect(root, prose, sites);

    std::vector<Formula> out;
    for (const auto& site : sites) {
        Formula f;
        f.id = doc_id + "#" + std::to_string(site.node->offset);
        f.doc_id = doc_id;
        f.latex = latex_of(*site.node);
        if (blank(f.latex)) continue;
        f.constituents = extract_mathml(*site.node);
        const std::size_t begin =
            code_point_floor(prose, site.prose_pos > options.context_window ? site.prose_pos - options.context_window
                                                                             : 0);
        const std::size_t end = code_point_floor(prose, std::min(prose.size(), site.prose_pos + options.context_window));
        f.context = prose.substr(begin, end - begin);
        f.context_offset = site.prose_pos - begin;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<Formula> ingest_ntcir(const fs::path& directory, const IngestOptions& options,
                                  std::vector<std::string>* warnings) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (fs::recursive_directory_iterator it(directory, ec), end; !ec && it != end; it.increment(ec)) {
        if (!it->is_regular_file()) continue;
        const auto ext = it->path().extension().string();
        if (ext == ".xhtml" || ext == ".html" || ext == ".xml" || ext == ".htm") files.push_back(it->path());
    }
    if (ec && warnings) warnings->push_back("directory walk stopped: " + ec.message());
    std::sort(files.begin(), files.end());

    std::vector<Formula> corpus;
    for (const auto& path : files) {
        try {
            auto formulas = ingest_document(read_file(path), path.stem().string(), options);
            std::move(formulas.begin(), formulas.end(), std::back_inserter(corpus));
        } catch (const Error& e) {
            if (warnings) warnings->push_back("skipped " + path.string() + ": " + e.what());
        }
    }
    if (corpus.empty()) throw Error(ErrorCode::IngestEmpty, "no formulas found under " + directory.string());
    return corpus;
}

} // namespace fcr
