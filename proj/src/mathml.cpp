#include "fcr/mathml.hpp"

#include "fcr/error.hpp"

namespace fcr {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\n' && c != '\r'; };
    while (!s.empty() && !not_space(s.back())) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && !not_space(s[start])) ++start;
    return s.substr(start);
}

void walk(const xml::Node& node, const TokenClassTable& table, ConstituentSet& out) {
    if (node.kind != xml::Node::Kind::Element) return;
    if (node.name == "annotation" || node.name == "annotation-xml") return;

    const bool is_mo = node.name == "mo";
    const bool is_mi = node.name == "mi";
    const bool is_mn = node.name == "mn";
    if (!(is_mo || is_mi || is_mn)) {
        for (const auto& child : node.children) walk(child, table, out);
        return;
    }

    std::string text = trim(node.text_content());
    if (text.empty() || is_invisible_operator(text)) return;
    if (is_mn) {
        out.tokens.push_back({TokenKind::Number, text});
        return;
    }
    if (auto name = latex_name_for_symbol(text)) text = *name;
    if (is_mo) {
        if (table.is_structural(text)) return;
        out.tokens.push_back({TokenKind::Operator, text});
    } else {
        out.tokens.push_back({TokenKind::Identifier, text});
    }
}

} // namespace

ConstituentSet extract_mathml(const xml::Node& math, const TokenClassTable& table) {
    ConstituentSet out;
    walk(math, table, out);
    return out;
}

ConstituentSet extract_mathml(std::string_view mathml, const TokenClassTable& table) {
    const xml::Node root = xml::parse(mathml);
    const xml::Node* math = xml::find_first(root, "math");
    if (math == nullptr) throw Error(ErrorCode::NotMathML, "no <math> element");
    return extract_mathml(*math, table);
}

} // namespace fcr
