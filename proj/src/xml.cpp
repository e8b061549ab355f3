#include "fcr/xml.hpp"

#include <map>

#include "fcr/error.hpp"

namespace fcr::xml {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
           c == '.' || c == ':' || static_cast<unsigned char>(c) >= 0x80;
}

std::string local_name(std::string_view qualified) {
    const auto colon = qualified.rfind(':');
    return std::string(colon == std::string_view::npos ? qualified : qualified.substr(colon + 1));
}

void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Node document() {
        Node root;
        bool have_root = false;
        while (true) {
            skip_misc();
            if (pos_ >= src_.size()) break;
            if (src_[pos_] != '<') {
                // Stray text outside the root is only tolerated when blank.
                fail("text outside the root element");
            }
            if (have_root) fail("more than one root element");
            root = element();
            have_root = true;
        }
        if (!have_root) fail("no root element");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }
    [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
        throw Error(ErrorCode::ParseError, what + " at byte offset " + std::to_string(at));
    }

    bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    void skip_until(std::string_view terminator, const char* what) {
        const auto end = src_.find(terminator, pos_);
        if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
        pos_ = end + terminator.size();
    }

    // Whitespace, comments, processing instructions, DOCTYPE.
    void skip_misc() {
        while (pos_ < src_.size()) {
            if (is_space(src_[pos_])) {
                ++pos_;
            } else if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<?")) {
                skip_until("?>", "processing instruction");
            } else if (starts_with("<!DOCTYPE") || starts_with("<!doctype")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    void skip_doctype() {
        int depth = 0;
        while (pos_ < src_.size()) {
            const char c = src_[pos_++];
            if (c == '[') ++depth;
            if (c == ']') --depth;
            if (c == '>' && depth <= 0) return;
        }
        fail("unterminated DOCTYPE");
    }

    std::string name() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_name_char(src_[pos_])) ++pos_;
        if (pos_ == start) fail("expected a name");
        return std::string(src_.substr(start, pos_ - start));
    }

    std::string decode(std::string_view raw, std::size_t base) const {
        static const std::map<std::string, unsigned long, std::less<>> named = {
            {"lt", '<'},      {"gt", '>'},      {"amp", '&'},     {"quot", '"'},     {"apos", '\''},
            {"nbsp", 0xA0},   {"InvisibleTimes", 0x2062},         {"ApplyFunction", 0x2061},
            {"minus", 0x2212}, {"times", 0xD7}, {"PlusMinus", 0xB1}, {"hbar", 0x210F},
            {"PartialD", 0x2202}, {"nabla", 0x2207}, {"Del", 0x2207}, {"psi", 0x3C8},
        };
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out.push_back(raw[i]);
                continue;
            }
            const auto semi = raw.find(';', i);
            if (semi == std::string_view::npos) fail_at(base + i, "unterminated entity reference");
            const std::string_view ent = raw.substr(i + 1, semi - i - 1);
            if (!ent.empty() && ent[0] == '#') {
                unsigned long cp = 0;
                try {
                    cp = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                             ? std::stoul(std::string(ent.substr(2)), nullptr, 16)
                             : std::stoul(std::string(ent.substr(1)), nullptr, 10);
                } catch (const std::exception&) {
                    fail_at(base + i, "bad character reference");
                }
                append_utf8(out, cp);
            } else if (auto it = named.find(ent); it != named.end()) {
                append_utf8(out, it->second);
            } else {
                // Unknown named entity: keep it verbatim.
                out.append(raw.substr(i, semi - i + 1));
            }
            i = semi;
        }
        return out;
    }

    Node element() {
        Node node;
        node.offset = pos_;
        ++pos_; // '<'
        node.name = local_name(name());
        // attributes
        while (true) {
            while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
            if (pos_ >= src_.size()) fail("unterminated start tag");
            if (starts_with("/>")) {
                pos_ += 2;
                return node;
            }
            if (src_[pos_] == '>') {
                ++pos_;
                break;
            }
            std::string key = local_name(name());
            while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
            if (pos_ >= src_.size() || src_[pos_] != '=') fail("expected '=' after attribute name");
            ++pos_;
            while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
            if (pos_ >= src_.size() || (src_[pos_] != '"' && src_[pos_] != '\'')) fail("expected quoted value");
            const char quote = src_[pos_++];
            const auto end = src_.find(quote, pos_);
            if (end == std::string_view::npos) fail("unterminated attribute value");
            node.attributes.emplace_back(std::move(key), decode(src_.substr(pos_, end - pos_), pos_));
            pos_ = end + 1;
        }
        // content
        while (true) {
            if (pos_ >= src_.size()) fail_at(node.offset, "unclosed element <" + node.name + ">");
            if (starts_with("</")) {
                const std::size_t close_at = pos_;
                pos_ += 2;
                const std::string closing = local_name(name());
                while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
                if (pos_ >= src_.size() || src_[pos_] != '>') fail("malformed end tag");
                ++pos_;
                if (closing != node.name) {
                    fail_at(close_at, "end tag </" + closing + "> does not match <" + node.name + ">");
                }
                return node;
            }
            if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<![CDATA[")) {
                const std::size_t start = pos_ + 9;
                skip_until("]]>", "CDATA section");
                Node text;
                text.kind = Node::Kind::Text;
                text.offset = start;
                text.text = std::string(src_.substr(start, pos_ - 3 - start));
                node.children.push_back(std::move(text));
            } else if (starts_with("<?")) {
                skip_until("?>", "processing instruction");
            } else if (src_[pos_] == '<') {
                node.children.push_back(element());
            } else {
                const std::size_t start = pos_;
                const auto lt = src_.find('<', pos_);
                pos_ = lt == std::string_view::npos ? src_.size() : lt;
                Node text;
                text.kind = Node::Kind::Text;
                text.offset = start;
                text.text = decode(src_.substr(start, pos_ - start), start);
                node.children.push_back(std::move(text));
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

void collect_text(const Node& node, std::string& out) {
    if (node.kind == Node::Kind::Text) {
        out += node.text;
        return;
    }
    for (const auto& child : node.children) collect_text(child, out);
}

} // namespace

std::optional<std::string> Node::attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string Node::text_content() const {
    std::string out;
    collect_text(*this, out);
    return out;
}

Node parse(std::string_view source) { return Parser(source).document(); }

const Node* find_first(const Node& root, std::string_view local_name) {
    if (root.is_element(local_name)) return &root;
    for (const auto& child : root.children) {
        if (const Node* hit = find_first(child, local_name)) return hit;
    }
    return nullptr;
}

} // namespace fcr::xml
