#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hbl/classify.hpp"
#include "hbl/handlebody.hpp"

namespace hbl::io {

/// Raised for malformed input documents (CLI exit code 2).
struct DocumentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Either a presentation file ({components, longitudes}) or a clasper schema
/// file ({n, genera, counts}); schemas are expanded on load.
hb::HandlebodyPresentation load_presentation(const std::string& json_text);
hb::HandlebodyPresentation load_presentation_file(const std::string& path);

hb::ClasperSchema parse_schema(const std::string& json_text);

std::string presentation_to_json(const hb::HandlebodyPresentation& pres);

/// Hypermatrix documents: {dims, entries, modulus?} or {tuple: [...]}.
std::vector<hmx::Hypermatrix> load_hypermatrices(const std::string& json_text);
std::vector<hmx::Hypermatrix> load_hypermatrices_file(const std::string& path);

std::string hypermatrix_to_json(const hmx::Hypermatrix& h);
std::string hypermatrices_to_json(const std::vector<hmx::Hypermatrix>& hs);

/// Move lists in the textual form printed by to_string, e.g.
/// "swap(axis=1,l=1,h=2); add(axis=3,l=2,h=1,c=-2)". `axis_key` is "axis"
/// for per-axis moves and "comp" for diagonal witnesses.
std::vector<hmx::Move> parse_moves(const std::string& text, const std::string& axis_key = "axis");
std::vector<classify::DiagonalMove> parse_diagonal_moves(const std::string& text);

std::string read_file(const std::string& path);

}  // namespace hbl::io
