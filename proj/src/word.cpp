#include "hbl/word.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace hbl::magnus {

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

struct Parser {
    std::string_view s;
    size_t i = 0;
    const std::set<std::string>& alphabet;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("word parse error at offset " + std::to_string(i) + ": " + msg);
    }

    std::string parse_name() {
        size_t start = i;
        if (i >= s.size() || !is_name_start(s[i])) fail("expected a label");
        ++i;
        while (i < s.size() && is_name_char(s[i])) ++i;
        std::string name(s.substr(start, i - start));
        if (!alphabet.contains(name)) fail("unknown label '" + name + "'");
        return name;
    }

    long long parse_exponent() {
        // caller consumed '^'
        skip_ws();
        size_t start = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        size_t digits = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == digits) fail("expected an integer exponent");
        return std::stoll(std::string(s.substr(start, i - start)));
    }

    Word parse_item() {
        skip_ws();
        Word base;
        if (s[i] == '[') {
            ++i;
            Word u = parse_sequence(',');
            if (i >= s.size() || s[i] != ',') fail("expected ',' in commutator");
            ++i;
            Word v = parse_sequence(']');
            if (i >= s.size() || s[i] != ']') fail("expected ']'");
            ++i;
            base = commutator(u, v);
        } else {
            base.push_back(Letter{parse_name(), +1});
        }
        skip_ws();
        if (i < s.size() && s[i] == '^') {
            ++i;
            return power(base, parse_exponent());
        }
        return base;
    }

    Word parse_sequence(char terminator) {
        Word out;
        for (;;) {
            skip_ws();
            if (i >= s.size() || s[i] == terminator) return out;
            if (s[i] == ']' || s[i] == ',') fail("unexpected '" + std::string(1, s[i]) + "'");
            Word item = parse_item();
            out.insert(out.end(), item.begin(), item.end());
        }
    }
};

}  // namespace

Word parse_word(std::string_view text, const std::set<std::string>& alphabet) {
    Parser p{text, 0, alphabet};
    Word w = p.parse_sequence('\0');
    p.skip_ws();
    if (p.i != text.size()) p.fail("trailing input");
    return w;
}

Word invert(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(Letter{it->circle, -it->sign});
    return out;
}

Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Word power(const Word& w, long long e) {
    const Word& base = e >= 0 ? w : invert(w);
    Word out;
    long long reps = e >= 0 ? e : -e;
    out.reserve(static_cast<size_t>(reps) * w.size());
    for (long long k = 0; k < reps; ++k) out.insert(out.end(), base.begin(), base.end());
    return out;
}

Word commutator(const Word& u, const Word& v) {
    return concat(concat(u, v), concat(invert(u), invert(v)));
}

Word free_reduce(const Word& w) {
    Word out;
    for (const Letter& l : w) {
        if (!out.empty() && out.back().circle == l.circle && out.back().sign == -l.sign) {
            out.pop_back();
        } else {
            out.push_back(l);
        }
    }
    return out;
}

std::string to_string(const Word& w) {
    std::string out;
    for (const Letter& l : w) {
        if (!out.empty()) out += ' ';
        out += l.circle;
        if (l.sign < 0) out += "^-1";
    }
    return out;
}

}  // namespace hbl::magnus
