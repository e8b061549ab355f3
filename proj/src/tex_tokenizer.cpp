#include "fcr/tex_tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "fcr/error.hpp"

namespace fcr {

namespace {

constexpr std::string_view kBuiltinTable = R"(# Default token classes for formula constituents.
[operators]
=
+
-
*
/
<
>
'
!
\frac
\tfrac
\dfrac
\cfrac
\over
\div
\partial
\nabla
\sum
\prod
\int
\oint
\iint
\iiint
\oiint
\geq
\ge
\leq
\le
\neq
\ne
\approx
\sim
\simeq
\cdot
\times
\equiv
\propto
\pm
\mp
\langle
\rangle
\perp
\parallel
\prime
\sqrt
\to
\rightarrow
\leftarrow
\Rightarrow
\mapsto
\lim
\sin
\cos
\tan
\exp
\log
\ln
\det
\otimes
\wedge
\circ
\dagger
[identifiers]
\alpha
\beta
\gamma
\delta
\epsilon
\varepsilon
\zeta
\eta
\theta
\vartheta
\iota
\kappa
\lambda
\mu
\nu
\xi
\pi
\varpi
\rho
\varrho
\sigma
\varsigma
\tau
\upsilon
\phi
\varphi
\chi
\psi
\omega
\Gamma
\Delta
\Theta
\Lambda
\Xi
\Pi
\Sigma
\Upsilon
\Phi
\Psi
\Omega
\hbar
\ell
\imath
\jmath
\infty
[structural]
\left
\right
\big
\Big
\bigg
\Bigg
\bigl
\bigr
\Bigl
\Bigr
\,
\;
\:
\!
\quad
\qquad
\\
\{
\}
\|
\mathrm
\text
\textrm
\mbox
\operatorname
\rm
\bf
\it
\cal
\vec
\hat
\widehat
\dot
\ddot
\bar
\overline
\tilde
\widetilde
\mathbf
\mathit
\mathcal
\mathbb
\textbf
\boldsymbol
\displaystyle
\textstyle
\limits
\nolimits
\nonumber
\hspace
\vspace
\label
\tag
\lbrack
\rbrack
\vert
\Vert
\lvert
\rvert
\cdots
\ldots
\dots
{
}
(
)
[
]
|
,
.
;
:
&
~
)";

// Emitted under a canonical spelling so that aliases compare equal.
const std::map<std::string, std::string, std::less<>>& aliases() {
    static const std::map<std::string, std::string, std::less<>> table = {
        {"\\frac", "/"}, {"\\tfrac", "/"}, {"\\dfrac", "/"}, {"\\cfrac", "/"}, {"\\over", "/"},
        {"\\div", "/"},  {"\\ge", "\\geq"}, {"\\le", "\\leq"}, {"\\ne", "\\neq"}, {"\\prime", "'"},
        {"\\rightarrow", "\\to"},
    };
    return table;
}

bool is_fraction(std::string_view cmd) {
    return cmd == "\\frac" || cmd == "\\tfrac" || cmd == "\\dfrac" || cmd == "\\cfrac";
}

// Commands whose braced argument is an upright word ("div", "const").
bool is_upright_name(std::string_view cmd) {
    return cmd == "\\text" || cmd == "\\mathrm" || cmd == "\\operatorname" || cmd == "\\textrm" ||
           cmd == "\\mbox";
}

// Font switches that apply to the following letters without braces.
bool is_upright_switch(std::string_view cmd) { return cmd == "\\rm"; }

// Commands whose argument carries layout only.
bool discards_argument(std::string_view cmd) {
    return cmd == "\\hspace" || cmd == "\\vspace" || cmd == "\\label" || cmd == "\\tag";
}

bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::size_t utf8_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if ((lead >> 5) == 0x6) return 2;
    if ((lead >> 4) == 0xE) return 3;
    if ((lead >> 3) == 0x1E) return 4;
    return 1;
}

class Lexer {
public:
    Lexer(std::string_view src, const TokenClassTable& table, ConstituentSet& out,
          std::vector<std::string>* warnings)
        : src_(src), table_(table), out_(out), warnings_(warnings) {}

    void run() {
        while (pos_ < src_.size()) step();
    }

private:
    void scan(std::string_view fragment) { Lexer(fragment, table_, out_, warnings_).run(); }

    void emit(TokenKind kind, std::string text) { out_.tokens.push_back({kind, std::move(text)}); }

    void skip_spaces() {
        while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
    }

    // Balanced group content after an opening brace at pos_; tolerates a
    // missing closing brace by running to the end of input.
    std::string_view read_group() {
        const std::size_t start = ++pos_;
        int depth = 1;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\\' && pos_ + 1 < src_.size()) {
                pos_ += 2;
                continue;
            }
            if (c == '{') ++depth;
            if (c == '}' && --depth == 0) {
                std::string_view body = src_.substr(start, pos_ - start);
                ++pos_;
                return body;
            }
            ++pos_;
        }
        return src_.substr(start);
    }

    std::string_view read_command() {
        const std::size_t start = pos_++;
        if (pos_ >= src_.size()) return src_.substr(start, 1);
        if (is_letter(src_[pos_])) {
            while (pos_ < src_.size() && is_letter(src_[pos_])) ++pos_;
        } else {
            pos_ += utf8_length(static_cast<unsigned char>(src_[pos_]));
        }
        return src_.substr(start, pos_ - start);
    }

    // A macro argument: a braced group, a command, or a single character.
    std::string_view read_argument() {
        skip_spaces();
        if (pos_ >= src_.size()) return {};
        if (src_[pos_] == '{') return read_group();
        if (src_[pos_] == '\\') return read_command();
        const std::size_t start = pos_;
        pos_ += utf8_length(static_cast<unsigned char>(src_[pos_]));
        return src_.substr(start, pos_ - start);
    }

    void emit_word_or_scan(std::string_view arg) {
        std::string word;
        for (char c : arg) {
            if (is_space(c)) continue;
            if (!is_letter(c)) {
                scan(arg);
                return;
            }
            word.push_back(c);
        }
        if (word.size() > 1) {
            emit(TokenKind::Operator, word);
        } else if (!word.empty()) {
            emit(TokenKind::Identifier, word);
        }
    }

    void emit_classified(std::string_view text) {
        std::string canonical(text);
        if (auto it = aliases().find(text); it != aliases().end()) canonical = it->second;
        if (auto kind = table_.classify(text)) {
            emit(*kind, canonical);
            return;
        }
        if (table_.is_structural(text)) return;
        if (warnings_) warnings_->push_back("unknown command '" + std::string(text) + "' treated as identifier");
        emit(TokenKind::Identifier, canonical);
    }

    void command() {
        const std::string_view cmd = read_command();
        if (cmd.size() == 2 && is_space(cmd[1])) return; // control space
        if (is_fraction(cmd)) {
            emit(TokenKind::Operator, "/");
            scan(read_argument());
            scan(read_argument());
            return;
        }
        if (is_upright_name(cmd)) {
            emit_word_or_scan(read_argument());
            return;
        }
        if (is_upright_switch(cmd)) {
            skip_spaces();
            const std::size_t start = pos_;
            while (pos_ < src_.size() && is_letter(src_[pos_])) ++pos_;
            emit_word_or_scan(src_.substr(start, pos_ - start));
            return;
        }
        if (discards_argument(cmd)) {
            read_argument();
            return;
        }
        emit_classified(cmd);
    }

    void number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' && is_digit(src_[pos_ + 1])) {
            ++pos_;
            while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        }
        emit(TokenKind::Number, std::string(src_.substr(start, pos_ - start)));
    }

    void step() {
        const char c = src_[pos_];
        if (is_space(c) || c == '^' || c == '_') {
            ++pos_;
        } else if (c == '\\') {
            command();
        } else if (is_letter(c)) {
            emit(TokenKind::Identifier, std::string(1, c));
            ++pos_;
        } else if (is_digit(c)) {
            number();
        } else if (static_cast<unsigned char>(c) >= 0x80) {
            const std::size_t len = utf8_length(static_cast<unsigned char>(c));
            std::string_view symbol = src_.substr(pos_, len);
            pos_ += len;
            if (is_invisible_operator(symbol)) return;
            if (auto name = latex_name_for_symbol(symbol)) {
                emit_classified(*name);
            } else {
                emit(TokenKind::Identifier, std::string(symbol));
            }
        } else {
            ++pos_;
            emit_classified(std::string_view(&src_[pos_ - 1], 1));
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    const TokenClassTable& table_;
    ConstituentSet& out_;
    std::vector<std::string>* warnings_;
};

} // namespace

const TokenClassTable& TokenClassTable::builtin() {
    static const TokenClassTable table = parse(kBuiltinTable);
    return table;
}

std::string_view TokenClassTable::builtin_text() { return kBuiltinTable; }

TokenClassTable TokenClassTable::parse(std::string_view text) {
    TokenClassTable table;
    std::set<std::string>* section = nullptr;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
        while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
        if (line.empty() || line.front() == '#') continue;
        if (line == "[operators]") {
            section = &table.operator_commands;
        } else if (line == "[identifiers]") {
            section = &table.identifier_commands;
        } else if (line == "[structural]") {
            section = &table.structural_commands;
        } else if (line.front() == '[' && line.size() > 2 && line.back() == ']') {
            throw Error(ErrorCode::InvalidConfig, "unknown section " + std::string(line) + " on line " +
                                                      std::to_string(line_no));
        } else if (section == nullptr) {
            throw Error(ErrorCode::InvalidConfig, "entry outside a section on line " + std::to_string(line_no));
        } else {
            section->insert(std::string(line));
        }
    }
    for (const auto& op : table.operator_commands) {
        if (table.identifier_commands.count(op) || table.structural_commands.count(op)) {
            throw Error(ErrorCode::InvalidConfig, "'" + op + "' listed in more than one class");
        }
    }
    for (const auto& id : table.identifier_commands) {
        if (table.structural_commands.count(id)) {
            throw Error(ErrorCode::InvalidConfig, "'" + id + "' listed in more than one class");
        }
    }
    return table;
}

std::optional<TokenKind> TokenClassTable::classify(std::string_view command) const {
    const std::string key(command);
    if (operator_commands.count(key)) return TokenKind::Operator;
    if (identifier_commands.count(key)) return TokenKind::Identifier;
    return std::nullopt;
}

bool TokenClassTable::is_structural(std::string_view command) const {
    return structural_commands.count(std::string(command)) > 0;
}

ConstituentSet tokenize_latex(std::string_view latex, const TokenClassTable& table,
                              std::vector<std::string>* warnings, const TokenizeOptions& options) {
    if (std::all_of(latex.begin(), latex.end(), is_space)) {
        throw Error(ErrorCode::EmptyFormula, "empty formula");
    }
    if (latex.size() > options.max_length) {
        throw Error(ErrorCode::OversizeFormula, "formula of " + std::to_string(latex.size()) +
                                                    " characters exceeds the cap of " +
                                                    std::to_string(options.max_length));
    }
    ConstituentSet out;
    Lexer(latex, table, out, warnings).run();
    return out;
}

std::optional<std::string> latex_name_for_symbol(std::string_view utf8) {
    static const std::map<std::string, std::string, std::less<>> symbols = {
        {"α", "\\alpha"},    {"β", "\\beta"},       {"γ", "\\gamma"},   {"δ", "\\delta"},
        {"ϵ", "\\epsilon"},  {"ε", "\\varepsilon"}, {"ζ", "\\zeta"},    {"η", "\\eta"},
        {"θ", "\\theta"},    {"ϑ", "\\vartheta"},   {"ι", "\\iota"},    {"κ", "\\kappa"},
        {"λ", "\\lambda"},   {"μ", "\\mu"},         {"ν", "\\nu"},      {"ξ", "\\xi"},
        {"π", "\\pi"},       {"ρ", "\\rho"},        {"ϱ", "\\varrho"},  {"σ", "\\sigma"},
        {"ς", "\\varsigma"}, {"τ", "\\tau"},        {"υ", "\\upsilon"}, {"ϕ", "\\phi"},
        {"φ", "\\varphi"},   {"χ", "\\chi"},        {"ψ", "\\psi"},     {"ω", "\\omega"},
        {"Γ", "\\Gamma"},    {"Δ", "\\Delta"},      {"Θ", "\\Theta"},   {"Λ", "\\Lambda"},
        {"Ξ", "\\Xi"},       {"Π", "\\Pi"},         {"Σ", "\\Sigma"},   {"Υ", "\\Upsilon"},
        {"Φ", "\\Phi"},      {"Ψ", "\\Psi"},        {"Ω", "\\Omega"},   {"ℏ", "\\hbar"},
        {"ℓ", "\\ell"},      {"∞", "\\infty"},      {"∂", "\\partial"}, {"∇", "\\nabla"},
        {"∑", "\\sum"},      {"∏", "\\prod"},       {"∫", "\\int"},     {"∮", "\\oint"},
        {"∬", "\\iint"},     {"∭", "\\iiint"},      {"∯", "\\oiint"},   {"≥", "\\geq"},
        {"≤", "\\leq"},      {"≠", "\\neq"},        {"≈", "\\approx"},  {"∼", "\\sim"},
        {"≃", "\\simeq"},    {"⋅", "\\cdot"},       {"·", "\\cdot"},    {"×", "\\times"},
        {"÷", "/"},          {"≡", "\\equiv"},      {"∝", "\\propto"},  {"±", "\\pm"},
        {"∓", "\\mp"},       {"⟨", "\\langle"},     {"⟩", "\\rangle"},  {"〈", "\\langle"},
        {"〉", "\\rangle"},  {"⊥", "\\perp"},       {"∥", "\\parallel"}, {"′", "'"},
        {"√", "\\sqrt"},     {"→", "\\to"},         {"−", "-"},         {"∗", "*"},
        {"⊗", "\\otimes"},   {"∘", "\\circ"},       {"†", "\\dagger"},  {"…", "\\ldots"},
        {"⋯", "\\cdots"},    {"‖", "\\|"},          {"∣", "|"},
    };
    auto it = symbols.find(utf8);
    if (it == symbols.end()) return std::nullopt;
    return it->second;
}

bool is_invisible_operator(std::string_view utf8) {
    // U+2061 function application .. U+2064 invisible plus
    return utf8 == "⁡" || utf8 == "⁢" || utf8 == "⁣" || utf8 == "⁤";
}

} // namespace fcr
