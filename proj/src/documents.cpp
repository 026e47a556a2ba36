#include "hbl/documents.hpp"

#include <cctype>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace hbl::io {

using nlohmann::ordered_json;

namespace {

ordered_json parse_json(const std::string& text) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DocumentError(std::string("invalid JSON: ") + e.what());
    }
}

void expect_fields(const ordered_json& obj, const std::string& what,
                   const std::set<std::string>& required, const std::set<std::string>& optional = {}) {
    if (!obj.is_object()) throw DocumentError(what + ": expected a JSON object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!required.contains(key) && !optional.contains(key))
            throw DocumentError(what + ": unknown field '" + key + "'");
    }
    for (const auto& key : required)
        if (!obj.contains(key)) throw DocumentError(what + ": missing field '" + key + "'");
}

long long get_int(const ordered_json& v, const std::string& what) {
    if (!v.is_number_integer()) throw DocumentError(what + ": expected an integer");
    return v.get<long long>();
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DocumentError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

hb::ClasperSchema parse_schema_json(const ordered_json& doc) {
    expect_fields(doc, "schema", {"n", "genera", "counts"});
    hb::ClasperSchema s;
    s.n = static_cast<int>(get_int(doc["n"], "schema.n"));
    if (!doc["genera"].is_array()) throw DocumentError("schema.genera: expected an array");
    for (const auto& g : doc["genera"]) s.genera.push_back(static_cast<int>(get_int(g, "schema.genera")));
    if (!doc["counts"].is_array()) throw DocumentError("schema.counts: expected an array");
    for (const auto& item : doc["counts"]) {
        expect_fields(item, "schema.counts entry", {"p", "ks", "a"});
        int p = static_cast<int>(get_int(item["p"], "counts.p"));
        if (!item["ks"].is_array()) throw DocumentError("counts.ks: expected an array");
        std::vector<int> ks;
        for (const auto& k : item["ks"]) ks.push_back(static_cast<int>(get_int(k, "counts.ks")));
        long long a = get_int(item["a"], "counts.a");
        auto key = std::make_pair(p, std::move(ks));
        if (s.counts.contains(key)) throw DocumentError("schema.counts: duplicate (p, ks) entry");
        s.counts.emplace(std::move(key), a);
    }
    return s;
}

hb::ClasperSchema parse_schema(const std::string& json_text) {
    return parse_schema_json(parse_json(json_text));
}

namespace {

hb::HandlebodyPresentation parse_presentation_json(const ordered_json& doc) {
    expect_fields(doc, "presentation", {"components"}, {"longitudes"});
    if (!doc["components"].is_array() || doc["components"].empty())
        throw DocumentError("presentation.components: expected a non-empty array");

    std::vector<hb::Component> components;
    std::set<std::string> alphabet;
    for (const auto& item : doc["components"]) {
        expect_fields(item, "component", {"genus", "circles"});
        hb::Component c;
        c.genus = static_cast<int>(get_int(item["genus"], "component.genus"));
        if (!item["circles"].is_array()) throw DocumentError("component.circles: expected an array");
        for (const auto& label : item["circles"]) {
            if (!label.is_string()) throw DocumentError("component.circles: expected strings");
            c.circles.push_back(label.get<std::string>());
            if (!alphabet.insert(c.circles.back()).second)
                throw DocumentError("presentation: duplicate circle label '" + c.circles.back() + "'");
        }
        if (static_cast<int>(c.circles.size()) != c.genus)
            throw DocumentError("component: genus does not match the number of circles");
        components.push_back(std::move(c));
    }

    std::map<std::string, magnus::Word> longitudes;
    if (doc.contains("longitudes")) {
        if (!doc["longitudes"].is_object())
            throw DocumentError("presentation.longitudes: expected an object");
        for (const auto& [label, text] : doc["longitudes"].items()) {
            if (!alphabet.contains(label))
                throw DocumentError("longitudes: unknown circle '" + label + "'");
            if (!text.is_string()) throw DocumentError("longitudes: expected word strings");
            try {
                longitudes[label] = magnus::parse_word(text.get<std::string>(), alphabet);
            } catch (const std::invalid_argument& e) {
                throw DocumentError("longitude of '" + label + "': " + e.what());
            }
        }
    }
    try {
        return hb::HandlebodyPresentation(std::move(components), std::move(longitudes));
    } catch (const std::invalid_argument& e) {
        throw DocumentError(std::string("presentation: ") + e.what());
    }
}

}  // namespace

hb::HandlebodyPresentation load_presentation(const std::string& json_text) {
    ordered_json doc = parse_json(json_text);
    if (doc.is_object() && doc.contains("n")) {
        try {
            return hb::from_clasper_schema(parse_schema_json(doc));
        } catch (const std::invalid_argument& e) {
            throw DocumentError(std::string("schema: ") + e.what());
        }
    }
    return parse_presentation_json(doc);
}

hb::HandlebodyPresentation load_presentation_file(const std::string& path) {
    return load_presentation(read_file(path));
}

std::string presentation_to_json(const hb::HandlebodyPresentation& pres) {
    ordered_json doc;
    doc["components"] = ordered_json::array();
    for (const auto& c : pres.components()) {
        ordered_json jc;
        jc["genus"] = c.genus;
        jc["circles"] = c.circles;
        doc["components"].push_back(std::move(jc));
    }
    ordered_json lons = ordered_json::object();
    for (const auto& c : pres.components())
        for (const auto& circle : c.circles) {
            const auto& w = pres.link().longitude(circle);
            if (!w.empty()) lons[circle] = magnus::to_string(w);
        }
    doc["longitudes"] = std::move(lons);
    return doc.dump(2) + "\n";
}

namespace {

hmx::Hypermatrix parse_hypermatrix_json(const ordered_json& doc) {
    expect_fields(doc, "hypermatrix", {"dims", "entries"}, {"modulus"});
    if (!doc["dims"].is_array() || doc["dims"].empty())
        throw DocumentError("hypermatrix.dims: expected a non-empty array");
    std::vector<int> dims;
    for (const auto& d : doc["dims"]) dims.push_back(static_cast<int>(get_int(d, "dims")));
    long long modulus = doc.contains("modulus") ? get_int(doc["modulus"], "modulus") : 0;
    if (!doc["entries"].is_array()) throw DocumentError("hypermatrix.entries: expected an array");
    std::vector<long long> entries;
    for (const auto& e : doc["entries"]) entries.push_back(get_int(e, "entries"));
    try {
        return hmx::Hypermatrix(std::move(dims), std::move(entries), modulus);
    } catch (const std::invalid_argument& e) {
        throw DocumentError(std::string("hypermatrix: ") + e.what());
    }
}

}  // namespace

std::vector<hmx::Hypermatrix> load_hypermatrices(const std::string& json_text) {
    ordered_json doc = parse_json(json_text);
    std::vector<hmx::Hypermatrix> out;
    if (doc.is_object() && doc.contains("tuple")) {
        expect_fields(doc, "hypermatrix tuple", {"tuple"});
        if (!doc["tuple"].is_array() || doc["tuple"].empty())
            throw DocumentError("tuple: expected a non-empty array");
        for (const auto& item : doc["tuple"]) out.push_back(parse_hypermatrix_json(item));
        for (const auto& h : out)
            if (h.dims() != out.front().dims() || h.modulus() != out.front().modulus())
                throw DocumentError("tuple: members must share dims and modulus");
    } else {
        out.push_back(parse_hypermatrix_json(doc));
    }
    return out;
}

std::vector<hmx::Hypermatrix> load_hypermatrices_file(const std::string& path) {
    return load_hypermatrices(read_file(path));
}

namespace {

ordered_json hypermatrix_json(const hmx::Hypermatrix& h) {
    ordered_json doc;
    doc["dims"] = h.dims();
    doc["modulus"] = h.modulus();
    doc["entries"] = h.entries();
    return doc;
}

}  // namespace

std::string hypermatrix_to_json(const hmx::Hypermatrix& h) {
    return hypermatrix_json(h).dump(2) + "\n";
}

std::string hypermatrices_to_json(const std::vector<hmx::Hypermatrix>& hs) {
    if (hs.size() == 1) return hypermatrix_to_json(hs.front());
    ordered_json doc;
    doc["tuple"] = ordered_json::array();
    for (const auto& h : hs) doc["tuple"].push_back(hypermatrix_json(h));
    return doc.dump(2) + "\n";
}

namespace {

struct MoveParser {
    const std::string& s;
    const std::string& axis_key;
    size_t i = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw DocumentError("move parse error at offset " + std::to_string(i) + ": " + msg);
    }
    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    std::string ident() {
        skip_ws();
        size_t start = i;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
        if (i == start) fail("expected an identifier");
        return s.substr(start, i - start);
    }
    long long integer() {
        skip_ws();
        size_t start = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        size_t digits = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == digits) fail("expected an integer");
        return std::stoll(s.substr(start, i - start));
    }
    long long field(const std::string& name) {
        std::string got = ident();
        if (got != name) fail("expected '" + name + "', got '" + got + "'");
        if (!eat('=')) fail("expected '='");
        return integer();
    }

    hmx::Move parse_one() {
        std::string kind = ident();
        if (!eat('(')) fail("expected '('");
        hmx::Move mv;
        if (kind == "swap") {
            mv.kind = hmx::MoveKind::Swap;
            mv.axis = static_cast<int>(field(axis_key));
            if (!eat(',')) fail("expected ','");
            mv.l = static_cast<int>(field("l"));
            if (!eat(',')) fail("expected ','");
            mv.h = static_cast<int>(field("h"));
        } else if (kind == "neg") {
            mv.kind = hmx::MoveKind::Negate;
            mv.axis = static_cast<int>(field(axis_key));
            if (!eat(',')) fail("expected ','");
            mv.l = static_cast<int>(field("l"));
            mv.h = mv.l;
        } else if (kind == "add") {
            mv.kind = hmx::MoveKind::AddMultiple;
            mv.axis = static_cast<int>(field(axis_key));
            if (!eat(',')) fail("expected ','");
            mv.l = static_cast<int>(field("l"));
            if (!eat(',')) fail("expected ','");
            mv.h = static_cast<int>(field("h"));
            if (!eat(',')) fail("expected ','");
            mv.c = field("c");
        } else {
            fail("unknown move '" + kind + "'");
        }
        if (!eat(')')) fail("expected ')'");
        return mv;
    }

    std::vector<hmx::Move> parse_all() {
        std::vector<hmx::Move> out;
        skip_ws();
        while (i < s.size()) {
            out.push_back(parse_one());
            skip_ws();
            if (i < s.size()) {
                if (!eat(';')) fail("expected ';' between moves");
                skip_ws();
            }
        }
        return out;
    }
};

}  // namespace

std::vector<hmx::Move> parse_moves(const std::string& text, const std::string& axis_key) {
    MoveParser p{text, axis_key, 0};
    return p.parse_all();
}

std::vector<classify::DiagonalMove> parse_diagonal_moves(const std::string& text) {
    std::vector<classify::DiagonalMove> out;
    for (const hmx::Move& mv : parse_moves(text, "comp"))
        out.push_back(classify::DiagonalMove{mv.axis, mv.kind, mv.l, mv.h, mv.c});
    return out;
}

}  // namespace hbl::io
